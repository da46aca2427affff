#pragma once

#include "citenorm/corpus.hpp"
#include "citenorm/counts.hpp"
#include "citenorm/journals.hpp"
#include "citenorm/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace citenorm {

struct FieldSpec {
    std::string field_code;
    std::size_t n_journals = 0;
    std::size_t papers_per_journal_per_year = 0;
    /// Poisson mean of reference-list length (at least 1 reference per paper).
    double mean_ref_len = 1.0;
    /// Years after which the probability of citing a given age halves.
    double ref_age_half_life = 1.0;
    /// Probability of citing outside the field.
    double cross_field_mix = 0.0;
};

struct SynthConfig {
    int census_year = 2010;
    std::vector<FieldSpec> fields;
    /// Standard deviation of log journal quality.
    double quality_spread = 0.5;
    int years_back = 20;
    std::uint64_t seed = 1;
    /// Probability that a reference is emitted without a usable year.
    double noise_invalid_year = 0.0;
    /// Probability that a reference points at an unlisted venue.
    double noise_unmatched_venue = 0.0;

    /// Throws std::invalid_argument on an impossible configuration.
    void validate() const;
};

/// Flat key=value file:
///   census_year, years_back, quality_spread, seed, noise_invalid_year,
///   noise_unmatched_venue, fields (comma-separated codes), and per field
///   <code>.n_journals, <code>.papers_per_journal_per_year,
///   <code>.mean_ref_len, <code>.ref_age_half_life, <code>.cross_field_mix.
/// '#' starts a comment line. Throws InputError on unknown keys or bad values.
SynthConfig parse_synth_config(std::istream& in);
SynthConfig load_synth_config(const std::filesystem::path& path);

struct GroundTruth {
    /// Latent multiplicative quality per journal (log-normal).
    std::map<std::string, double> quality;
    /// Expected field-mean fractional (in-window base) quasi-IF, per window.
    /// Empty when any field mixes across fields.
    std::map<std::string, double> expected_if2_fc;
    std::map<std::string, double> expected_if5_fc;
};

struct SynthCorpus {
    Corpus corpus;
    JournalTable journals;
    FieldScheme fields;
    GroundTruth truth;
};

/// Journal ids are "<field>-J<nnn>", abbreviations "<field> J<nnn>". Census
/// documents cite a journal of their own field with probability 1 - mix
/// (weighted by quality) and otherwise a uniformly drawn journal of another
/// field. Each journal draws from its own generator seeded from
/// (seed, journal position), so output does not depend on the thread count.
SynthCorpus generate_corpus(const SynthConfig& config, unsigned threads = 1);

/// Probability that a reference's age falls in the window under the
/// truncated geometric age law on 0..years_back.
double in_window_age_mass(double half_life, int years_back, WindowKind window);

/// Closed-form expected field-mean fractional quasi-IF (in-window base).
/// Throws std::invalid_argument when any field has cross_field_mix > 0.
std::map<std::string, double> expected_fractional_rate(const SynthConfig& config, WindowKind window);

/// TSV: journal_id, field, quality.
void write_ground_truth(std::ostream& out, const SynthCorpus& synth);
/// TSV: journal_id, field.
void write_field_scheme(std::ostream& out, const FieldScheme& scheme);

} // namespace citenorm
