#include "citenorm/cli.hpp"

#include "citenorm/corpus.hpp"
#include "citenorm/error.hpp"
#include "citenorm/indicators.hpp"
#include "citenorm/percentile.hpp"
#include "citenorm/pipeline.hpp"
#include "citenorm/stats.hpp"
#include "citenorm/synthgen.hpp"
#include "citenorm/tsv.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>

namespace citenorm::cli {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
    int census_year = 0;
    std::string journals;
    std::string fields;
    std::string out = ".";
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string citable_types = "article,review";
    std::size_t min_group_size = 10;
};

class Diagnostics {
public:
    explicit Diagnostics(std::ostream& err)
        : err_(err)
    {
    }

    void warn(const std::string& message)
    {
        err_ << "warning: " << message << '\n';
        warned_ = true;
    }
    void info(const std::string& message) { err_ << message << '\n'; }

    int exit_code() const { return warned_ ? ExitCode::warnings : ExitCode::success; }

private:
    std::ostream& err_;
    bool warned_ = false;
};

/// Key/value record of one invocation, written next to its outputs. Holds
/// nothing that varies between identical invocations (no clock, no thread
/// count).
class Manifest {
public:
    explicit Manifest(std::string command)
        : command_(std::move(command))
    {
        set("tool", "citenorm");
        set("version", tool_version);
        set("command", command_);
    }

    void set(const std::string& key, const std::string& value) { rows_.emplace_back(key, value); }
    void input(const fs::path& path) { set("input:" + path.string(), tsv::file_digest(path)); }

    void write(const fs::path& dir) const
    {
        std::ofstream out(dir / (command_ + ".manifest.tsv"), std::ios::binary);
        out << "key\tvalue\n";
        for (const auto& [key, value] : rows_) {
            out << key << '\t' << value << '\n';
        }
        if (!out) {
            throw InputError("cannot write manifest in " + dir.string());
        }
    }

private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> rows_;
};

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& writer)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    writer(out);
    if (!out) {
        throw InputError("failed writing " + path.string());
    }
}

fs::path output_dir(const GlobalOptions& g)
{
    fs::path dir(g.out);
    fs::create_directories(dir);
    return dir;
}

int require_census_year(const GlobalOptions& g)
{
    if (g.census_year <= 1900) {
        throw InputError("--census-year is required (and must be after 1900)");
    }
    return g.census_year;
}

JournalTable require_journals(const GlobalOptions& g, Manifest& manifest)
{
    if (g.journals.empty()) {
        throw InputError("--journals is required");
    }
    manifest.input(g.journals);
    return load_journals(g.journals);
}

std::set<DocType> parse_citable_types(const std::string& csv)
{
    std::set<DocType> types;
    for (auto token : tsv::split(csv, ',')) {
        token = tsv::trim(token);
        if (token.empty()) {
            continue;
        }
        const auto type = parse_doc_type(token);
        if (!type) {
            throw InputError("--citable-types: unknown document type '" + std::string(token) + "'");
        }
        types.insert(*type);
    }
    if (types.empty()) {
        throw InputError("--citable-types: empty set");
    }
    return types;
}

SourceFormat resolve_format(const std::string& format, const fs::path& path)
{
    if (format == "jsonl") return SourceFormat::jsonl;
    if (format == "tsv") return SourceFormat::tsv;
    if (format.empty() || format == "auto") return format_from_path(path);
    throw InputError("--format must be jsonl, tsv or auto");
}

Corpus load_reported(const fs::path& path, const std::string& format, int census, Diagnostics& diag)
{
    auto corpus = load_corpus(path, resolve_format(format, path), census);
    for (const auto& e : corpus.errors) {
        diag.warn(path.string() + ":" + std::to_string(e.line) + ": skipped record: " + e.message);
    }
    for (const auto& w : corpus.warnings) {
        diag.warn(path.string() + ":" + std::to_string(w.line) + ": " + w.message);
    }
    return corpus;
}

void write_load_issues(const fs::path& path, const Corpus& corpus)
{
    write_file(path, [&](std::ostream& out) {
        out << "line\tkind\tmessage\n";
        for (const auto& e : corpus.errors) {
            out << e.line << "\terror\t" << e.message << '\n';
        }
        for (const auto& w : corpus.warnings) {
            out << w.line << "\twarning\t" << w.message << '\n';
        }
    });
}

IndicatorTable load_indicator(const fs::path& path, const JournalTable* journals, Manifest& manifest,
                              Diagnostics& diag)
{
    manifest.input(path);
    auto imported = import_external_indicator(path, "", journals);
    for (const auto& w : imported.warnings) {
        diag.warn(path.string() + ": " + w);
    }
    for (const auto& e : imported.errors) {
        diag.warn(path.string() + ":" + std::to_string(e.line) + ": " + e.message);
    }
    if (imported.table.values.empty()) {
        throw InputError(path.string() + ": no usable values");
    }
    return std::move(imported.table);
}

std::optional<JournalTable> optional_journals(const GlobalOptions& g, Manifest& manifest)
{
    if (g.journals.empty()) {
        return std::nullopt;
    }
    // indicator files carry merged ids
    return merge_journal_parts(Corpus{}, require_journals(g, manifest)).journals;
}

// ---------------------------------------------------------------------------

int cmd_validate(const GlobalOptions& g, const std::string& corpus_path, const std::string& format,
                 std::ostream& err)
{
    Diagnostics diag(err);
    Manifest manifest("validate");
    const int census = require_census_year(g);
    manifest.set("census_year", std::to_string(census));
    const auto journals = require_journals(g, manifest);
    manifest.input(corpus_path);
    auto corpus = load_reported(corpus_path, format, census, diag);
    const auto dir = output_dir(g);
    write_load_issues(dir / "load_issues.tsv", corpus);

    PipelineOptions options;
    options.threads = g.threads;
    const auto data = prepare_corpus(std::move(corpus), journals, options);
    write_file(dir / "validation.tsv", [&](std::ostream& out) { write_validation_report(out, data.report); });
    manifest.write(dir);
    diag.info("validated " + std::to_string(data.report.total_docs) + " documents, "
              + std::to_string(data.report.total_refs) + " references");
    return diag.exit_code();
}

int cmd_indicators(const GlobalOptions& g, const std::string& corpus_path, const std::string& format,
                   const std::vector<std::string>& imports, std::ostream& err)
{
    Diagnostics diag(err);
    Manifest manifest("indicators");
    const int census = require_census_year(g);
    manifest.set("census_year", std::to_string(census));
    PipelineOptions options;
    options.threads = g.threads;
    options.citable_types = parse_citable_types(g.citable_types);
    std::vector<std::string> citable;
    for (auto t : options.citable_types) {
        citable.emplace_back(to_string(t));
    }
    manifest.set("citable_types", tsv::join(citable, ","));

    const auto journals = require_journals(g, manifest);
    manifest.input(corpus_path);
    auto corpus = load_reported(corpus_path, format, census, diag);
    const auto dir = output_dir(g);
    write_load_issues(dir / "load_issues.tsv", corpus);

    const auto data = prepare_corpus(std::move(corpus), journals, options);
    auto set = compute_indicators(data, options);

    std::vector<IndicatorTable> variables;
    for (const auto& spec : imports) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw InputError("--import expects ID=PATH, got '" + spec + "'");
        }
        const std::string id = spec.substr(0, eq);
        const fs::path path = spec.substr(eq + 1);
        manifest.input(path);
        auto imported = import_external_indicator(path, id, &data.journals);
        imported.table.indicator_id = id;
        for (const auto& w : imported.warnings) {
            diag.warn(path.string() + ": " + w);
        }
        for (const auto& e : imported.errors) {
            diag.warn(path.string() + ":" + std::to_string(e.line) + ": " + e.message);
        }
        variables.push_back(std::move(imported.table));
    }
    variables.insert(variables.end(), set.variables.begin(), set.variables.end());

    write_file(dir / "validation.tsv", [&](std::ostream& out) { write_validation_report(out, data.report); });
    for (const auto& c : set.counts) {
        write_file(dir / "counts" / (indicator_file_stem(c.variable_name()) + ".tsv"),
                   [&](std::ostream& out) { write_count_table(out, c); });
    }
    for (const auto& v : variables) {
        const auto stem = indicator_file_stem(v.indicator_id);
        write_file(dir / "indicators" / (stem + ".tsv"), [&](std::ostream& out) { write_indicator_table(out, v); });
        write_file(dir / "indicators" / (stem + ".tsv.undefined"),
                   [&](std::ostream& out) { write_undefined_journals(out, v); });
        if (!v.values.empty()) {
            const auto pr = percentile_table(v);
            write_file(dir / "percentiles" / (stem + ".tsv"),
                       [&](std::ostream& out) { write_percentile_table(out, pr); });
        }
    }
    write_file(dir / "indicators_wide.tsv", [&](std::ostream& out) { write_wide_table(out, variables); });
    manifest.set("journals_after_merge", std::to_string(data.journals.size()));
    manifest.write(dir);
    diag.info("wrote " + std::to_string(variables.size()) + " indicators to " + dir.string());
    return diag.exit_code();
}

int cmd_rank(const GlobalOptions& g, const std::string& path, std::optional<std::size_t> top, bool pr6,
             std::ostream& err)
{
    Diagnostics diag(err);
    Manifest manifest("rank");
    if (top.has_value() == pr6) {
        throw InputError("rank: give exactly one of --top K or --pr6");
    }
    const auto journals = optional_journals(g, manifest);
    const auto table = load_indicator(path, journals ? &*journals : nullptr, manifest, diag);
    const auto name_of = [&](const std::string& id) {
        if (journals) {
            if (const auto idx = journals->find_id(id)) {
                return (*journals)[*idx].full_name;
            }
        }
        return id;
    };

    const auto dir = output_dir(g);
    const auto stem = indicator_file_stem(table.indicator_id);
    if (top) {
        manifest.set("top", std::to_string(*top));
        std::vector<std::pair<std::string, double>> rows(table.values.begin(), table.values.end());
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        if (*top > rows.size()) {
            diag.warn("requested top " + std::to_string(*top) + " of a population of " + std::to_string(rows.size())
                      + "; listing all");
        }
        rows.resize(std::min(rows.size(), *top));
        write_file(dir / (stem + ".top" + std::to_string(*top) + ".tsv"), [&](std::ostream& out) {
            out << "rank\tjournal_id\tname\t" << table.indicator_id << '\n';
            for (std::size_t i = 0; i < rows.size(); ++i) {
                out << i + 1 << '\t' << rows[i].first << '\t' << name_of(rows[i].first) << '\t'
                    << tsv::fixed(rows[i].second, 6) << '\n';
            }
        });
    } else {
        manifest.set("pr6", "6");
        const auto pr = percentile_table(table);
        std::vector<std::string> members;
        for (const auto& [journal, cls] : pr.pr6) {
            if (cls == 6) {
                members.push_back(journal);
            }
        }
        std::sort(members.begin(), members.end(), [&](const std::string& a, const std::string& b) {
            const auto na = name_of(a);
            const auto nb = name_of(b);
            return na != nb ? na < nb : a < b;
        });
        write_file(dir / (stem + ".pr6_top.tsv"), [&](std::ostream& out) {
            out << "journal_id\tname\t" << table.indicator_id << "\tpr100\n";
            for (const auto& j : members) {
                out << j << '\t' << name_of(j) << '\t' << tsv::fixed(table.values.at(j), 6) << '\t'
                    << tsv::fixed(pr.pr100.at(j), 4) << '\n';
            }
        });
        diag.info(std::to_string(members.size()) + " journals in the top class of " + std::to_string(pr.n));
    }
    manifest.write(dir);
    return diag.exit_code();
}

int cmd_correlate(const GlobalOptions& g, const std::vector<std::string>& paths, std::ostream& err)
{
    Diagnostics diag(err);
    Manifest manifest("correlate");
    const auto journals = optional_journals(g, manifest);
    std::vector<IndicatorTable> tables;
    for (const auto& p : paths) {
        tables.push_back(load_indicator(p, journals ? &*journals : nullptr, manifest, diag));
    }
    const auto matrix = correlation_matrix(tables);
    manifest.set("population", std::to_string(matrix.population));
    manifest.set("layout", "upper=spearman lower=pearson");
    if (matrix.has_undefined()) {
        diag.warn("some correlations are undefined (constant indicator); written as NA");
    }
    const auto dir = output_dir(g);
    write_file(dir / "correlation.tsv", [&](std::ostream& out) { write_correlation_matrix(out, matrix); });
    manifest.write(dir);
    return diag.exit_code();
}

int cmd_varcomp(const GlobalOptions& g, const std::vector<std::string>& paths, std::size_t n_perm,
                const std::string& reference_id, const std::string& statistic_name, std::ostream& err)
{
    Diagnostics diag(err);
    Manifest manifest("varcomp");
    PermStatistic statistic = PermStatistic::eta2;
    if (statistic_name == "sigma2_between") {
        statistic = PermStatistic::sigma2_between;
    } else if (statistic_name != "eta2") {
        throw InputError("--statistic must be eta2 or sigma2_between");
    }
    const auto journals = optional_journals(g, manifest);
    FieldScheme scheme;
    if (!g.fields.empty()) {
        manifest.input(g.fields);
        scheme = load_field_scheme(g.fields);
    } else if (journals) {
        scheme = field_scheme_from_journals(*journals);
    } else {
        throw InputError("varcomp needs --fields or --journals for the field assignment");
    }
    scheme.min_group_size = g.min_group_size;
    manifest.set("min_group_size", std::to_string(g.min_group_size));
    manifest.set("n_perm", std::to_string(n_perm));
    manifest.set("seed", std::to_string(g.seed));
    manifest.set("statistic", statistic_name);
    manifest.set("reference", reference_id);
    manifest.set("note", "between/within components are one-way method-of-moments estimates on the raw indicator "
                         "scale with label-permutation p-values; compare reductions and significance, not magnitudes");

    std::vector<IndicatorTable> tables;
    for (const auto& p : paths) {
        tables.push_back(load_indicator(p, journals ? &*journals : nullptr, manifest, diag));
    }
    // common journal population so reductions compare like with like
    std::set<std::string> common;
    for (const auto& [journal, value] : tables.front().values) {
        if (std::all_of(tables.begin(), tables.end(), [&](const auto& t) { return t.values.contains(journal); })) {
            common.insert(journal);
        }
    }
    manifest.set("population", std::to_string(common.size()));

    std::vector<VarCompResult> results;
    for (const auto& t : tables) {
        std::map<std::string, double> values;
        for (const auto& j : common) {
            values.emplace(j, t.values.at(j));
        }
        const auto grouped = group_by_field(values, scheme);
        for (const auto& f : grouped.excluded_fields) {
            manifest.set("excluded_field:" + t.indicator_id, f);
        }
        auto r = varcomp_moments(grouped, t.indicator_id);
        r.perm_p = permutation_test(grouped, statistic, n_perm, g.seed, g.threads);
        results.push_back(std::move(r));
    }

    const auto dir = output_dir(g);
    write_file(dir / "varcomp.tsv", [&](std::ostream& out) { write_varcomp_table(out, results); });
    write_file(dir / "varcomp_dispersion.tsv", [&](std::ostream& out) {
        out << "indicator_id\tfield\tvar_over_mean\n";
        for (const auto& r : results) {
            for (const auto& [field, d] : r.dispersion_by_field) {
                out << r.indicator_id << '\t' << field << '\t' << tsv::general(d, 10) << '\n';
            }
        }
    });
    const auto ref = std::find_if(results.begin(), results.end(),
                                  [&](const VarCompResult& r) { return r.indicator_id == reference_id; });
    if (ref == results.end()) {
        diag.warn("reference indicator '" + reference_id + "' not among the inputs; no reduction block");
    } else {
        write_file(dir / "varcomp_reduction.tsv", [&](std::ostream& out) {
            out << "reference_id\tindicator_id\treduction\n";
            for (const auto& r : results) {
                if (r.indicator_id == reference_id) {
                    continue;
                }
                const auto red = variance_reduction(*ref, r);
                out << reference_id << '\t' << r.indicator_id << '\t' << (red ? tsv::fixed(*red, 6) : "NA") << '\n';
            }
        });
    }
    manifest.write(dir);
    return diag.exit_code();
}

int cmd_synth(const GlobalOptions& g, bool census_set, bool seed_set, const std::string& config_path,
              std::ostream& err)
{
    Diagnostics diag(err);
    Manifest manifest("synth");
    manifest.input(config_path);
    auto config = load_synth_config(config_path);
    if (census_set) {
        config.census_year = g.census_year;
    }
    if (seed_set) {
        config.seed = g.seed;
    }
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    manifest.set("census_year", std::to_string(config.census_year));
    manifest.set("seed", std::to_string(config.seed));

    const auto synth = generate_corpus(config, g.threads);
    const auto dir = output_dir(g);
    write_file(dir / "corpus.jsonl", [&](std::ostream& out) { write_corpus(out, synth.corpus, SourceFormat::jsonl); });
    write_file(dir / "journals.tsv", [&](std::ostream& out) { write_journals(out, synth.journals); });
    write_file(dir / "fields.tsv", [&](std::ostream& out) { write_field_scheme(out, synth.fields); });
    write_file(dir / "ground_truth.tsv", [&](std::ostream& out) { write_ground_truth(out, synth); });
    manifest.write(dir);
    diag.info("generated " + std::to_string(synth.corpus.documents.size()) + " documents for "
              + std::to_string(synth.journals.size()) + " journals");
    return diag.exit_code();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Field-normalized journal citation indicators"};
    app.set_version_flag("--version", tool_version);
    app.set_config("--config", "", "key=value file with defaults for any long option");
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    auto* census_opt = app.add_option("--census-year", g.census_year, "Year of the citing documents");
    app.add_option("--journals", g.journals, "Journal master TSV");
    app.add_option("--fields", g.fields, "Field scheme TSV (journal_id, field)");
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--citable-types", g.citable_types, "Document types counted as citable items")
        ->capture_default_str();
    app.add_option("--min-group-size", g.min_group_size, "Smallest field kept in between-field tests")
        ->capture_default_str();

    std::string corpus_path;
    std::string format = "auto";
    std::vector<std::string> imports;
    std::vector<std::string> indicator_files;
    std::string single_file;
    std::size_t top = 0;
    bool pr6 = false;
    std::size_t n_perm = 9999;
    std::string reference_id = "IF2-IC";
    std::string statistic = "eta2";
    std::string synth_config;

    auto* validate = app.add_subcommand("validate", "Parse, match and tally the cited references");
    validate->add_option("corpus", corpus_path, "Documents file (JSONL or TSV)")->required();
    validate->add_option("--format", format, "jsonl, tsv or auto")->capture_default_str();

    auto* indicators = app.add_subcommand("indicators", "Compute citation totals, quasi-IFs, fc/p and percentiles");
    indicators->add_option("corpus", corpus_path, "Documents file (JSONL or TSV)")->required();
    indicators->add_option("--format", format, "jsonl, tsv or auto")->capture_default_str();
    indicators->add_option("--import", imports, "External indicator as ID=PATH (e.g. ISI-IF2=jcr.tsv)");

    auto* rank = app.add_subcommand("rank", "Top-k or top-PR6-class listing of one indicator");
    rank->add_option("indicator", single_file, "Indicator TSV")->required();
    auto* top_opt = rank->add_option("--top", top, "Descending top-k by value");
    auto* pr6_opt = rank->add_flag("--pr6", pr6, "Members of the top percentile class, alphabetically");
    top_opt->excludes(pr6_opt);

    auto* correlate = app.add_subcommand("correlate", "Spearman/Pearson matrix over indicators");
    correlate->add_option("indicators", indicator_files, "Indicator TSVs")->required()->expected(2, -1);

    auto* varcomp = app.add_subcommand("varcomp", "Between-field variance components and permutation tests");
    varcomp->add_option("indicators", indicator_files, "Indicator TSVs")->required();
    varcomp->add_option("--n-perm", n_perm, "Permutations")->capture_default_str();
    varcomp->add_option("--reference", reference_id, "Indicator the reductions are measured against")
        ->capture_default_str();
    varcomp->add_option("--statistic", statistic, "eta2 or sigma2_between")->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
    synth->add_option("config", synth_config, "key=value synth configuration")->required();

    std::vector<std::string> argv_store;
    argv_store.push_back("citenorm");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitCode::success : ExitCode::fatal;
    }

    try {
        if (validate->parsed()) {
            return cmd_validate(g, corpus_path, format, err);
        }
        if (indicators->parsed()) {
            return cmd_indicators(g, corpus_path, format, imports, err);
        }
        if (rank->parsed()) {
            return cmd_rank(g, single_file, top_opt->count() > 0 ? std::optional<std::size_t>(top) : std::nullopt, pr6,
                            err);
        }
        if (correlate->parsed()) {
            return cmd_correlate(g, indicator_files, err);
        }
        if (varcomp->parsed()) {
            return cmd_varcomp(g, indicator_files, n_perm, reference_id, statistic, err);
        }
        if (synth->parsed()) {
            return cmd_synth(g, census_opt->count() > 0, seed_opt->count() > 0, synth_config, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::fatal;
    }
    return ExitCode::fatal;
}

} // namespace citenorm::cli
