#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisylearn/dfa_random.hpp"
#include "noisylearn/kv_learner.hpp"
#include "noisylearn/metrics.hpp"
#include "noisylearn/word_distribution.hpp"

namespace noisylearn {

enum class NoiseKind { none, noisy_output, noisy_input, counter, pathological };

NoiseKind parse_noise_kind(const std::string& name);
const char* to_string(NoiseKind kind);

// One batch of learning runs: dfa_count random DFAs per noise parameter,
// each wrapped in the configured device, learned, and measured. Every
// record is a pure function of (config, master_seed), independent of the
// worker count.
struct ExperimentConfig {
    NoiseKind noise = NoiseKind::noisy_output;
    std::vector<double> p_values = {0.005};  // used by noisy_output / noisy_input
    std::uint32_t dfa_count = 10;
    GenParams gen;  // per-record seeds are derived from master_seed; gen.seed is ignored
    double mu = 0.01;
    PacParams pac;
    StatParams stat{5e-3, 1e-2};
    std::uint64_t master_seed = 1;
    std::optional<ReductionParams> reduction;
    bool eld_partition = false;
    std::uint32_t parallelism = 1;

    void validate() const;
};

// Flat key = value format, '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// on_record, when set, is called once per finished record (under a lock,
// in completion order, which under parallelism is not index order).
std::vector<ExperimentRecord> run_experiment(
    const ExperimentConfig& config,
    const std::function<void(const ExperimentRecord&)>& on_record = {});

void write_records_csv_header(std::ostream& out);
void write_record_csv_row(std::ostream& out, const ExperimentRecord& record);
void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records);

enum class Scale { desk, paper };

// Runs the experiment grid behind one of the report tables and writes its
// CSV. Ids: 2 noisy output, 3 noisy input, 4 counter, 5 pathological,
// 6 distribution sweep, 7 size reduction, 8/9 noisy input split by the
// equal-length-distinguishing property. Desk scale uses 10 DFAs per cell
// with the coarse sampling parameters; paper scale uses the full counts
// and alpha = 5e-4, gamma = 1e-3 (roughly 15.2M samples per distance).
void reproduce_table(int table_id, Scale scale, std::uint64_t master_seed,
                     std::uint32_t parallelism, bool trim_extremes, std::ostream& out);

// Runs fn(0..count-1) on the given number of threads. Deterministic
// outputs are the caller's job: fn must write only to its own slot.
void parallel_for(std::size_t count, std::uint32_t workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace noisylearn
