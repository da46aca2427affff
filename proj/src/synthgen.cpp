#include "citenorm/synthgen.hpp"

#include "citenorm/detail/parallel.hpp"
#include "citenorm/detail/random.hpp"
#include "citenorm/error.hpp"
#include "citenorm/tsv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace citenorm {

void SynthConfig::validate() const
{
    const auto fail = [](const std::string& why) { throw std::invalid_argument("synth config: " + why); };
    if (fields.empty()) {
        fail("no fields");
    }
    if (years_back < 5) {
        fail("years_back must be at least 5");
    }
    if (census_year - years_back < 1900) {
        fail("census_year - years_back must not precede 1900");
    }
    if (!(quality_spread >= 0.0)) {
        fail("quality_spread must be non-negative");
    }
    if (!(noise_invalid_year >= 0.0 && noise_invalid_year <= 1.0)
        || !(noise_unmatched_venue >= 0.0 && noise_unmatched_venue <= 1.0)) {
        fail("noise rates must lie in [0, 1]");
    }
    std::set<std::string> codes;
    std::size_t journals = 0;
    for (const auto& f : fields) {
        if (f.field_code.empty() || f.field_code.find_first_of(" \t|,;=") != std::string::npos) {
            fail("field code '" + f.field_code + "' is empty or contains a separator");
        }
        if (!codes.insert(f.field_code).second) {
            fail("duplicate field code '" + f.field_code + "'");
        }
        if (f.n_journals == 0) {
            fail("field '" + f.field_code + "' has no journals");
        }
        if (f.papers_per_journal_per_year == 0) {
            fail("field '" + f.field_code + "' has no papers per journal");
        }
        if (!(f.mean_ref_len >= 1.0) || f.mean_ref_len > 500.0) {
            fail("field '" + f.field_code + "': mean_ref_len must lie in [1, 500]");
        }
        if (!(f.ref_age_half_life > 0.0)) {
            fail("field '" + f.field_code + "': ref_age_half_life must be positive");
        }
        if (!(f.cross_field_mix >= 0.0 && f.cross_field_mix <= 1.0)) {
            fail("field '" + f.field_code + "': cross_field_mix must lie in [0, 1]");
        }
        journals += f.n_journals;
    }
    if (journals < 2) {
        fail("need at least 2 journals in total");
    }
}

SynthConfig parse_synth_config(std::istream& in)
{
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (tsv::next_record(in, line, line_no)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InputError("synth config line " + std::to_string(line_no) + ": expected key=value");
        }
        kv[std::string(tsv::trim(std::string_view(line).substr(0, eq)))] =
            std::string(tsv::trim(std::string_view(line).substr(eq + 1)));
    }

    std::set<std::string> used;
    const auto take = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            return std::nullopt;
        }
        used.insert(key);
        return it->second;
    };
    const auto number = [&](const std::string& key, double fallback, bool required) {
        const auto text = take(key);
        if (!text) {
            if (required) {
                throw InputError("synth config: missing key '" + key + "'");
            }
            return fallback;
        }
        const auto value = tsv::parse_double(*text);
        if (!value) {
            throw InputError("synth config: '" + key + "' is not a number");
        }
        return *value;
    };
    const auto integer = [&](const std::string& key, std::int64_t fallback, bool required) {
        const auto text = take(key);
        if (!text) {
            if (required) {
                throw InputError("synth config: missing key '" + key + "'");
            }
            return fallback;
        }
        const auto value = tsv::parse_int(*text);
        if (!value || *value < 0) {
            throw InputError("synth config: '" + key + "' is not a non-negative integer");
        }
        return *value;
    };

    SynthConfig cfg;
    cfg.census_year = static_cast<int>(integer("census_year", cfg.census_year, false));
    cfg.years_back = static_cast<int>(integer("years_back", cfg.years_back, false));
    cfg.quality_spread = number("quality_spread", cfg.quality_spread, false);
    cfg.seed = static_cast<std::uint64_t>(integer("seed", static_cast<std::int64_t>(cfg.seed), false));
    cfg.noise_invalid_year = number("noise_invalid_year", 0.0, false);
    cfg.noise_unmatched_venue = number("noise_unmatched_venue", 0.0, false);
    const auto codes = take("fields");
    if (!codes) {
        throw InputError("synth config: missing key 'fields'");
    }
    for (auto code : tsv::split(*codes, ',')) {
        code = tsv::trim(code);
        if (code.empty()) {
            continue;
        }
        const std::string c(code);
        FieldSpec f;
        f.field_code = c;
        f.n_journals = static_cast<std::size_t>(integer(c + ".n_journals", 0, true));
        f.papers_per_journal_per_year = static_cast<std::size_t>(integer(c + ".papers_per_journal_per_year", 0, true));
        f.mean_ref_len = number(c + ".mean_ref_len", 0.0, true);
        f.ref_age_half_life = number(c + ".ref_age_half_life", 0.0, true);
        f.cross_field_mix = number(c + ".cross_field_mix", 0.0, false);
        cfg.fields.push_back(std::move(f));
    }
    for (const auto& [key, value] : kv) {
        if (!used.contains(key)) {
            throw InputError("synth config: unknown key '" + key + "'");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return cfg;
}

SynthConfig load_synth_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open synth config " + path.string());
    }
    return parse_synth_config(in);
}

namespace {

double age_ratio(double half_life)
{
    return std::pow(2.0, -1.0 / half_life);
}

std::pair<int, int> window_ages(WindowKind window, int years_back)
{
    switch (window) {
    case WindowKind::two_year: return {1, 2};
    case WindowKind::five_year: return {1, 5};
    case WindowKind::all_years: return {0, years_back};
    }
    return {0, years_back};
}

std::string numbered(const std::string& prefix, std::size_t number, int width)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*zu", width, number);
    return prefix + buf;
}

/// Index of the first cumulative weight exceeding u * total.
std::size_t draw_cumulative(std::mt19937_64& rng, const std::vector<double>& cumulative)
{
    const double target = detail::uniform01(rng) * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

} // namespace

double in_window_age_mass(double half_life, int years_back, WindowKind window)
{
    const double r = age_ratio(half_life);
    const auto [lo, hi] = window_ages(window, years_back);
    double total = 0.0;
    double inside = 0.0;
    double w = 1.0;
    for (int age = 0; age <= years_back; ++age) {
        total += w;
        if (age >= lo && age <= hi) {
            inside += w;
        }
        w *= r;
    }
    return inside / total;
}

std::map<std::string, double> expected_fractional_rate(const SynthConfig& config, WindowKind window)
{
    if (window == WindowKind::all_years) {
        throw std::invalid_argument("expected_fractional_rate: only two- and five-year windows have a denominator");
    }
    std::map<std::string, double> rates;
    for (const auto& f : config.fields) {
        if (f.cross_field_mix > 0.0) {
            throw std::invalid_argument("expected_fractional_rate: field '" + f.field_code
                                        + "' mixes across fields; no closed form");
        }
        const double p = in_window_age_mass(f.ref_age_half_life, config.years_back, window);
        const double mu = f.mean_ref_len;
        // reference count R = max(1, Poisson(mu)):
        // P(no in-window reference) = E[(1-p)^R] = exp(-mu p) - p exp(-mu)
        const double credited = 1.0 - (std::exp(-mu * p) - p * std::exp(-mu));
        const double window_years = window == WindowKind::two_year ? 2.0 : 5.0;
        rates.emplace(f.field_code, credited / window_years);
    }
    return rates;
}

SynthCorpus generate_corpus(const SynthConfig& config, unsigned threads)
{
    config.validate();

    struct JournalSlot {
        std::size_t field = 0;
        std::size_t number = 0;
    };
    std::vector<JournalSlot> slots;
    std::vector<std::size_t> field_begin;
    for (std::size_t f = 0; f < config.fields.size(); ++f) {
        field_begin.push_back(slots.size());
        for (std::size_t j = 0; j < config.fields[f].n_journals; ++j) {
            slots.push_back({f, j + 1});
        }
    }
    field_begin.push_back(slots.size());
    const std::size_t total_journals = slots.size();

    SynthCorpus out;
    std::vector<Journal> journals;
    std::vector<double> quality(total_journals);
    {
        auto rng = detail::substream(config.seed, UINT64_MAX);
        for (std::size_t i = 0; i < total_journals; ++i) {
            quality[i] = std::exp(config.quality_spread * detail::standard_normal(rng));
        }
    }
    for (std::size_t i = 0; i < total_journals; ++i) {
        const auto& f = config.fields[slots[i].field];
        Journal j;
        j.journal_id = numbered(f.field_code + "-J", slots[i].number, 3);
        j.full_name = numbered("Synthetic " + f.field_code + " Journal ", slots[i].number, 3);
        j.abbreviations.push_back(numbered(f.field_code + " J", slots[i].number, 3));
        j.field_code = f.field_code;
        for (int y = config.census_year - config.years_back; y <= config.census_year; ++y) {
            j.items_by_year[y] = static_cast<std::int64_t>(f.papers_per_journal_per_year);
        }
        out.truth.quality.emplace(j.journal_id, quality[i]);
        out.fields.assignment.emplace(j.journal_id, j.field_code);
        journals.push_back(std::move(j));
    }
    out.fields.name = "synthetic";

    // Within-field targets weighted by quality x size; size is uniform inside a
    // field so quality alone decides.
    std::vector<std::vector<double>> field_cumulative(config.fields.size());
    std::vector<std::vector<double>> age_cumulative(config.fields.size());
    for (std::size_t f = 0; f < config.fields.size(); ++f) {
        double acc = 0.0;
        for (std::size_t i = field_begin[f]; i < field_begin[f + 1]; ++i) {
            acc += quality[i] * static_cast<double>(config.fields[f].papers_per_journal_per_year);
            field_cumulative[f].push_back(acc);
        }
        const double r = age_ratio(config.fields[f].ref_age_half_life);
        double w = 1.0;
        acc = 0.0;
        for (int age = 0; age <= config.years_back; ++age) {
            acc += w;
            age_cumulative[f].push_back(acc);
            w *= r;
        }
    }

    std::vector<std::vector<Document>> per_journal(total_journals);
    detail::parallel_for(total_journals, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t f = slots[i].field;
            const auto& spec = config.fields[f];
            const std::size_t own = field_begin[f + 1] - field_begin[f];
            auto rng = detail::substream(config.seed, i);
            auto& docs = per_journal[i];
            docs.reserve(spec.papers_per_journal_per_year);
            for (std::size_t p = 0; p < spec.papers_per_journal_per_year; ++p) {
                Document doc;
                doc.doc_id = numbered(journals[i].journal_id + "-", p + 1, 6);
                doc.journal_id = journals[i].journal_id;
                doc.pub_year = config.census_year;
                doc.doc_type = DocType::article;
                const auto n_refs = std::max<std::int64_t>(1, detail::poisson(rng, spec.mean_ref_len));
                doc.refs.reserve(static_cast<std::size_t>(n_refs));
                for (std::int64_t r = 0; r < n_refs; ++r) {
                    std::size_t target = 0;
                    const bool cross = total_journals > own && detail::uniform01(rng) < spec.cross_field_mix;
                    if (cross) {
                        target = detail::uniform_below(rng, total_journals - own);
                        if (target >= field_begin[f]) {
                            target += own;
                        }
                    } else {
                        target = field_begin[f] + draw_cumulative(rng, field_cumulative[f]);
                    }
                    const auto age = static_cast<int>(draw_cumulative(rng, age_cumulative[f]));
                    std::string year = std::to_string(config.census_year - age);
                    std::string venue = journals[target].abbreviations.front();
                    if (config.noise_invalid_year > 0.0 && detail::uniform01(rng) < config.noise_invalid_year) {
                        year = "ND";
                    }
                    if (config.noise_unmatched_venue > 0.0 && detail::uniform01(rng) < config.noise_unmatched_venue) {
                        venue = "UNLISTED " + venue;
                    }
                    doc.refs.push_back({"X, " + year + ", " + venue, std::nullopt});
                }
                doc.ref_count = n_refs;
                docs.push_back(std::move(doc));
            }
        }
    });

    out.corpus.census_year = config.census_year;
    out.corpus.source_format = SourceFormat::jsonl;
    std::size_t n_docs = 0;
    for (const auto& docs : per_journal) {
        n_docs += docs.size();
    }
    out.corpus.documents.reserve(n_docs);
    for (auto& docs : per_journal) {
        std::move(docs.begin(), docs.end(), std::back_inserter(out.corpus.documents));
        docs.clear();
        docs.shrink_to_fit();
    }
    out.journals = JournalTable(std::move(journals));

    const bool closed_form = std::all_of(config.fields.begin(), config.fields.end(),
                                         [](const FieldSpec& f) { return f.cross_field_mix == 0.0; });
    if (closed_form) {
        out.truth.expected_if2_fc = expected_fractional_rate(config, WindowKind::two_year);
        out.truth.expected_if5_fc = expected_fractional_rate(config, WindowKind::five_year);
    }
    return out;
}

void write_ground_truth(std::ostream& out, const SynthCorpus& synth)
{
    out << "journal_id\tfield\tquality\texpected_if2_fc\texpected_if5_fc\n";
    for (const auto& [journal, q] : synth.truth.quality) {
        const auto& field = synth.fields.assignment.at(journal);
        const auto rate = [&](const std::map<std::string, double>& rates) {
            const auto it = rates.find(field);
            return it == rates.end() ? std::string("NA") : tsv::general(it->second, 10);
        };
        out << journal << '\t' << field << '\t' << tsv::general(q, 10) << '\t' << rate(synth.truth.expected_if2_fc)
            << '\t' << rate(synth.truth.expected_if5_fc) << '\n';
    }
}

void write_field_scheme(std::ostream& out, const FieldScheme& scheme)
{
    out << "journal_id\tfield\n";
    for (const auto& [journal, field] : scheme.assignment) {
        out << journal << '\t' << field << '\n';
    }
}

} // namespace citenorm
