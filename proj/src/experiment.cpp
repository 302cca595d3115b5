#include "noisylearn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "noisylearn/eld.hpp"
#include "noisylearn/oracles.hpp"
#include "noisylearn/rng.hpp"

namespace noisylearn {

NoiseKind parse_noise_kind(const std::string& name) {
    if (name == "none") return NoiseKind::none;
    if (name == "noisy_output") return NoiseKind::noisy_output;
    if (name == "noisy_input") return NoiseKind::noisy_input;
    if (name == "counter") return NoiseKind::counter;
    if (name == "pathological") return NoiseKind::pathological;
    throw std::invalid_argument("unknown noise kind: " + name);
}

const char* to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::none: return "none";
        case NoiseKind::noisy_output: return "noisy_output";
        case NoiseKind::noisy_input: return "noisy_input";
        case NoiseKind::counter: return "counter";
        case NoiseKind::pathological: return "pathological";
    }
    return "?";
}

namespace {

bool uses_p(NoiseKind kind) {
    return kind == NoiseKind::noisy_output || kind == NoiseKind::noisy_input;
}

}  // namespace

void ExperimentConfig::validate() const {
    gen.validate();
    pac.validate();
    stat.validate();
    WordDistribution{mu, gen.min_alphabet}.validate();
    if (dfa_count == 0) throw std::invalid_argument("config: dfa_count must be positive");
    if (parallelism == 0) throw std::invalid_argument("config: parallelism must be positive");
    if (uses_p(noise)) {
        if (p_values.empty()) throw std::invalid_argument("config: no p values");
        for (double p : p_values)
            if (!(p > 0.0 && p < 1.0))
                throw std::invalid_argument("config: p values must lie in (0,1)");
    }
    if (reduction) {
        if (reduction->period == 0)
            throw std::invalid_argument("config: reduction period must be positive");
        if (!(reduction->c_threshold > 0.0))
            throw std::invalid_argument("config: reduction threshold must be positive");
    }
}

void parallel_for(std::size_t count, std::uint32_t workers,
                  const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    std::uint32_t n = std::min<std::uint32_t>(workers, static_cast<std::uint32_t>(count));
    threads.reserve(n);
    for (std::uint32_t t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

std::unique_ptr<MembershipOracle> make_device(NoiseKind kind, const Dfa& original, double p,
                                              std::uint64_t dfa_seed,
                                              const Word& forbidden_prefix) {
    const std::uint64_t device_seed = derive_seed(dfa_seed, "device");
    switch (kind) {
        case NoiseKind::none:
            return std::make_unique<DfaOracle>(original);
        case NoiseKind::noisy_output:
            return std::make_unique<NoisyOutputDevice>(original, p, device_seed);
        case NoiseKind::noisy_input:
            return std::make_unique<NoisyInputDevice>(original, p, device_seed);
        case NoiseKind::counter:
            return std::make_unique<CounterDevice>(
                original,
                random_counter_function(original.alphabet_size, derive_seed(dfa_seed, "counter")));
        case NoiseKind::pathological:
            return std::make_unique<PathologicalDevice>(original, forbidden_prefix, device_seed);
    }
    throw std::logic_error("make_device: unreachable");
}

ExperimentRecord compute_record(const ExperimentConfig& cfg, std::uint32_t experiment_index,
                                double p) {
    const std::uint64_t dfa_seed = derive_seed(cfg.master_seed, experiment_index);

    ExperimentRecord rec;
    rec.seed = dfa_seed;
    rec.dfa_id = experiment_index;
    rec.noise_kind = to_string(cfg.noise);
    rec.noise_param = uses_p(cfg.noise) ? p : 0.0;

    GenParams gen = cfg.gen;
    gen.seed = dfa_seed;
    Dfa original;
    Word forbidden_prefix;
    std::optional<Dfa> plus;
    if (cfg.noise == NoiseKind::pathological) {
        PathologicalDfa pg = random_pathological_dfa(gen);
        original = std::move(pg.dfa);
        forbidden_prefix = std::move(pg.forbidden_prefix);
        plus = plus_variant(original, forbidden_prefix);
    } else {
        original = random_dfa(gen);
    }
    rec.original_size = original.state_count;
    if (cfg.eld_partition) rec.eld = is_equal_length_distinguishing(original);

    auto device = make_device(cfg.noise, original, p, dfa_seed, forbidden_prefix);
    WordDistribution dist{cfg.mu, original.alphabet_size};

    LearnOutcome outcome = learn_pac(*device, dist, cfg.pac, derive_seed(dfa_seed, "learner"),
                                     cfg.reduction ? cfg.reduction->period : 0);
    rec.learned_size = outcome.learned.state_count;
    rec.rounds_used = outcome.rounds_used;
    rec.stopped_by = outcome.stopped_by;
    rec.membership_queries = outcome.membership_queries;

    DfaOracle original_oracle(original);
    DfaOracle learned_oracle(outcome.learned);
    rec.d_original_learned = statistical_distance(original_oracle, learned_oracle, dist, cfg.stat,
                                                  derive_seed(dfa_seed, "dist-original-learned"));
    if (cfg.noise == NoiseKind::pathological) {
        // The plus variant differs from the original exactly on the cone of
        // the forbidden prefix, so this distance is known in closed form.
        rec.d_original_noisy = cone_probability(dist, forbidden_prefix);
        DfaOracle plus_oracle(*plus);
        rec.d_noisy_learned = statistical_distance(plus_oracle, learned_oracle, dist, cfg.stat,
                                                   derive_seed(dfa_seed, "dist-noisy-learned"));
        rec.gain = pathological_gain(rec.d_noisy_learned, rec.d_original_learned);
        rec.band = pathological_gain_band(rec.gain);
    } else {
        rec.d_original_noisy = statistical_distance(original_oracle, *device, dist, cfg.stat,
                                                    derive_seed(dfa_seed, "dist-original-noisy"));
        rec.d_noisy_learned = statistical_distance(*device, learned_oracle, dist, cfg.stat,
                                                   derive_seed(dfa_seed, "dist-noisy-learned"));
        rec.gain = information_gain(rec.d_original_noisy, rec.d_original_learned);
        rec.band = gain_band(rec.gain);
    }

    if (cfg.reduction) {
        ReductionChoice choice = select_reduced_dfa(outcome, dist, *cfg.reduction, cfg.stat,
                                                    derive_seed(dfa_seed, "reduce"));
        rec.reduced_size = choice.dfa.state_count;
        DfaOracle reduced_oracle(choice.dfa);
        double rd_original =
            statistical_distance(original_oracle, reduced_oracle, dist, cfg.stat,
                                 derive_seed(dfa_seed, "dist-original-reduced"));
        rec.reduced_d_original_learned = rd_original;
        if (cfg.noise == NoiseKind::pathological) {
            DfaOracle plus_oracle(*plus);
            double rd_plus = statistical_distance(plus_oracle, reduced_oracle, dist, cfg.stat,
                                                  derive_seed(dfa_seed, "dist-noisy-reduced"));
            rec.reduced_d_noisy_learned = rd_plus;
            rec.reduced_gain = pathological_gain(rd_plus, rd_original);
        } else {
            rec.reduced_d_noisy_learned =
                statistical_distance(*device, reduced_oracle, dist, cfg.stat,
                                     derive_seed(dfa_seed, "dist-noisy-reduced"));
            rec.reduced_gain = information_gain(rec.d_original_noisy, rd_original);
        }
    }
    return rec;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(
    const ExperimentConfig& config,
    const std::function<void(const ExperimentRecord&)>& on_record) {
    config.validate();
    std::vector<double> params = uses_p(config.noise) ? config.p_values : std::vector<double>{0.0};
    const std::size_t total = params.size() * config.dfa_count;
    std::vector<ExperimentRecord> records(total);
    std::mutex report_mutex;
    parallel_for(total, config.parallelism, [&](std::size_t i) {
        double p = params[i / config.dfa_count];
        records[i] = compute_record(config, static_cast<std::uint32_t>(i), p);
        if (on_record) {
            std::lock_guard<std::mutex> lock(report_mutex);
            on_record(records[i]);
        }
    });
    return records;
}

namespace {

std::string fmt(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

}  // namespace

void write_records_csv_header(std::ostream& out) {
    out << "dfa_id,seed,noise,p,eld,d_A_noisy,d_A_learned,d_noisy_learned,gain,band,"
           "original_size,learned_size,rounds_used,stopped_by,membership_queries,"
           "reduced_size,reduced_d_A_learned,reduced_d_noisy_learned,reduced_gain\n";
}

void write_record_csv_row(std::ostream& out, const ExperimentRecord& r) {
    out << r.dfa_id << ',' << r.seed << ',' << r.noise_kind << ',' << fmt(r.noise_param) << ','
        << (r.eld ? "true" : "false") << ',' << fmt(r.d_original_noisy) << ','
        << fmt(r.d_original_learned) << ',' << fmt(r.d_noisy_learned) << ',' << fmt(r.gain) << ','
        << to_string(r.band) << ',' << r.original_size << ',' << r.learned_size << ','
        << r.rounds_used << ','
        << (r.stopped_by == StopReason::equivalent ? "equivalent" : "maxround") << ','
        << r.membership_queries << ','
        << (r.reduced_size ? std::to_string(*r.reduced_size) : std::string{}) << ','
        << fmt_opt(r.reduced_d_original_learned) << ',' << fmt_opt(r.reduced_d_noisy_learned)
        << ',' << fmt_opt(r.reduced_gain) << '\n';
}

void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records) {
    write_records_csv_header(out);
    for (const auto& r : records) write_record_csv_row(out, r);
}

namespace {

// ---- config file ----

[[noreturn]] void config_fail(std::size_t line_no, const std::string& line,
                              const std::string& what) {
    std::ostringstream msg;
    msg << "config error at line " << line_no << " (" << what << "): " << line;
    throw std::runtime_error(msg.str());
}

std::vector<std::string> split_values(const std::string& text) {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream s(normalized);
    std::vector<std::string> out;
    std::string tok;
    while (s >> tok) out.push_back(tok);
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("expected a boolean, got: " + v);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    ReductionParams reduction;
    bool reduction_on = false;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = line;
        if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
        auto eq = text.find('=');
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos) config_fail(line_no, line, "expected key = value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty()) config_fail(line_no, line, "expected key = value");

        try {
            if (key == "noise") {
                cfg.noise = parse_noise_kind(value);
            } else if (key == "p") {
                cfg.p_values.clear();
                for (const auto& v : split_values(value)) cfg.p_values.push_back(std::stod(v));
            } else if (key == "dfa_count") {
                cfg.dfa_count = static_cast<std::uint32_t>(std::stoul(value));
            } else if (key == "min_states") {
                cfg.gen.min_states = static_cast<State>(std::stoul(value));
            } else if (key == "max_states") {
                cfg.gen.max_states = static_cast<State>(std::stoul(value));
            } else if (key == "min_alphabet") {
                cfg.gen.min_alphabet = static_cast<Letter>(std::stoul(value));
            } else if (key == "max_alphabet") {
                cfg.gen.max_alphabet = static_cast<Letter>(std::stoul(value));
            } else if (key == "mu") {
                cfg.mu = std::stod(value);
            } else if (key == "epsilon") {
                cfg.pac.epsilon = std::stod(value);
            } else if (key == "delta") {
                cfg.pac.delta = std::stod(value);
            } else if (key == "maxround") {
                cfg.pac.maxround = static_cast<std::uint32_t>(std::stoul(value));
            } else if (key == "alpha") {
                cfg.stat.alpha = std::stod(value);
            } else if (key == "gamma") {
                cfg.stat.gamma = std::stod(value);
            } else if (key == "master_seed") {
                cfg.master_seed = std::stoull(value);
            } else if (key == "reduction") {
                reduction_on = parse_bool(value);
            } else if (key == "reduction_period") {
                reduction.period = static_cast<std::uint32_t>(std::stoul(value));
            } else if (key == "reduction_c") {
                reduction.c_threshold = std::stod(value);
            } else if (key == "reduction_exact") {
                reduction.exact_distance = parse_bool(value);
            } else if (key == "eld_partition") {
                cfg.eld_partition = parse_bool(value);
            } else if (key == "parallelism") {
                cfg.parallelism = static_cast<std::uint32_t>(std::stoul(value));
            } else {
                config_fail(line_no, line, "unknown key '" + key + "'");
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception& e) {
            config_fail(line_no, line, e.what());
        }
    }
    if (reduction_on) cfg.reduction = reduction;
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in);
}

namespace {

// ---- report tables ----

struct TableScale {
    std::uint32_t dfa_count;
    StatParams stat;
    std::uint32_t maxround;
};

TableScale scale_for(Scale scale, std::uint32_t paper_dfa_count) {
    if (scale == Scale::paper) return {paper_dfa_count, StatParams{5e-4, 1e-3}, 250};
    return {10, StatParams{5e-3, 1e-2}, 100};
}

ExperimentConfig base_config(NoiseKind kind, const TableScale& ts, std::uint64_t master_seed,
                             std::uint32_t parallelism) {
    ExperimentConfig cfg;
    cfg.noise = kind;
    cfg.dfa_count = ts.dfa_count;
    cfg.stat = ts.stat;
    cfg.pac.maxround = ts.maxround;
    cfg.master_seed = master_seed;
    cfg.parallelism = parallelism;
    return cfg;
}

struct MeanStd {
    double mean = 0.0;
    double std_dev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    if (xs.empty()) return {};
    double sum = 0;
    for (double x : xs) sum += x;
    double mean = sum / static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return {mean, xs.size() > 1 ? std::sqrt(var / (static_cast<double>(xs.size()) - 1.0)) : 0.0};
}

double mean_finite_gain(const std::vector<double>& gains, std::size_t& infinite_count) {
    double sum = 0;
    std::size_t finite = 0;
    infinite_count = 0;
    for (double g : gains) {
        if (std::isinf(g)) {
            ++infinite_count;
        } else {
            sum += g;
            ++finite;
        }
    }
    return finite ? sum / static_cast<double>(finite) : std::numeric_limits<double>::infinity();
}

void table_noisy_output(const TableScale& ts, std::uint64_t master_seed,
                        std::uint32_t parallelism, std::ostream& out) {
    ExperimentConfig cfg = base_config(NoiseKind::noisy_output, ts, master_seed, parallelism);
    cfg.p_values = {0.01, 0.005, 0.0025, 0.0015, 0.001};
    auto records = run_experiment(cfg);
    out << "p,count,mean_d_A_learned,mean_d_noisy_learned,mean_gain,inf_gain_count,std_dev,band\n";
    for (double p : cfg.p_values) {
        std::vector<double> d_learned, d_noisy_learned, gains;
        for (const auto& r : records) {
            if (r.noise_param != p) continue;
            d_learned.push_back(r.d_original_learned);
            d_noisy_learned.push_back(r.d_noisy_learned);
            gains.push_back(r.gain);
        }
        std::size_t infs = 0;
        double gain = mean_finite_gain(gains, infs);
        auto ms = mean_std(d_learned);
        out << fmt(p) << ',' << d_learned.size() << ',' << fmt(ms.mean) << ','
            << fmt(mean_std(d_noisy_learned).mean) << ',' << fmt(gain) << ',' << infs << ','
            << fmt(ms.std_dev) << ',' << to_string(gain_band(gain)) << '\n';
    }
}

void table_bucketed(NoiseKind kind, std::span<const RangeInterval> ranges,
                    const std::vector<double>& p_values, const TableScale& ts,
                    std::uint64_t master_seed, std::uint32_t parallelism, bool pathological,
                    std::optional<bool> eld_filter, std::ostream& out) {
    ExperimentConfig cfg = base_config(kind, ts, master_seed, parallelism);
    if (!p_values.empty()) cfg.p_values = p_values;
    if (eld_filter) {
        cfg.eld_partition = true;
        cfg.gen.min_alphabet = 3;  // larger alphabets almost never fail the property
        cfg.gen.max_alphabet = 3;
    }
    auto records = run_experiment(cfg);
    std::vector<ExperimentRecord> kept;
    for (auto& r : records)
        if (!eld_filter || r.eld == *eld_filter) kept.push_back(std::move(r));
    auto buckets = bucket_by_range(kept, ranges, pathological);
    write_bucket_csv(out, buckets);
}

void table_distribution_sweep(const TableScale& ts, std::uint64_t master_seed,
                              std::uint32_t parallelism, bool trim_extremes, std::ostream& out) {
    const std::vector<double> mus = {0.001, 0.005, 0.01, 0.05, 0.1};
    const std::vector<double> ps = {0.01, 0.005, 0.0025, 0.0015, 0.001};
    out << "p";
    for (double mu : mus) out << ",mu_" << fmt(mu);
    out << '\n';
    std::vector<std::vector<double>> cells(ps.size() * mus.size());
    std::size_t cell_index = 0;
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        for (std::size_t mi = 0; mi < mus.size(); ++mi, ++cell_index) {
            ExperimentConfig cfg =
                base_config(NoiseKind::noisy_output, ts,
                            derive_seed(master_seed, cell_index), parallelism);
            cfg.p_values = {ps[pi]};
            cfg.mu = mus[mi];
            auto records = run_experiment(cfg);
            for (const auto& r : records) cells[pi * mus.size() + mi].push_back(r.gain);
        }
    }
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        out << fmt(ps[pi]);
        for (std::size_t mi = 0; mi < mus.size(); ++mi) {
            std::vector<double> gains = cells[pi * mus.size() + mi];
            if (trim_extremes && gains.size() >= 3) {
                std::sort(gains.begin(), gains.end());
                gains.erase(gains.begin());
                gains.pop_back();
            }
            std::size_t infs = 0;
            out << ',' << fmt(mean_finite_gain(gains, infs));
        }
        out << '\n';
    }
}

void table_size_reduction(const TableScale& ts, std::uint64_t master_seed,
                          std::uint32_t parallelism, std::ostream& out) {
    ExperimentConfig cfg = base_config(NoiseKind::noisy_output, ts, master_seed, parallelism);
    cfg.p_values = {0.01, 0.005, 0.0025, 0.0015, 0.001};
    cfg.reduction = ReductionParams{};
    auto records = run_experiment(cfg);
    out << "p,count,mean_reduced_size,mean_learned_size,size_ratio,mean_reduced_gain,mean_gain\n";
    for (double p : cfg.p_values) {
        std::vector<double> reduced_sizes, learned_sizes, gains, reduced_gains;
        for (const auto& r : records) {
            if (r.noise_param != p) continue;
            reduced_sizes.push_back(static_cast<double>(*r.reduced_size));
            learned_sizes.push_back(static_cast<double>(r.learned_size));
            gains.push_back(r.gain);
            reduced_gains.push_back(*r.reduced_gain);
        }
        std::size_t infs = 0, rinfs = 0;
        double mean_reduced = mean_std(reduced_sizes).mean;
        double mean_learned = mean_std(learned_sizes).mean;
        out << fmt(p) << ',' << reduced_sizes.size() << ',' << fmt(mean_reduced) << ','
            << fmt(mean_learned) << ',' << fmt(mean_learned > 0 ? mean_reduced / mean_learned : 0)
            << ',' << fmt(mean_finite_gain(reduced_gains, rinfs)) << ','
            << fmt(mean_finite_gain(gains, infs)) << '\n';
    }
}

}  // namespace

void reproduce_table(int table_id, Scale scale, std::uint64_t master_seed,
                     std::uint32_t parallelism, bool trim_extremes, std::ostream& out) {
    const std::vector<double> input_ps = {1e-4, 5e-4, 1e-3, 5e-3};
    switch (table_id) {
        case 2:
            table_noisy_output(scale_for(scale, 50), master_seed, parallelism, out);
            return;
        case 3: {
            const RangeInterval ranges[] = {
                {0.025, 1.0}, {0.005, 0.025}, {0.002, 0.005}, {0.001, 0.002}, {0.0005, 0.001}};
            table_bucketed(NoiseKind::noisy_input, ranges, input_ps, scale_for(scale, 45),
                           master_seed, parallelism, false, std::nullopt, out);
            return;
        }
        case 4: {
            const RangeInterval ranges[] = {
                {0.005, 0.025}, {0.002, 0.005}, {0.001, 0.002}, {0.0005, 0.001}, {0.0001, 0.0005}};
            table_bucketed(NoiseKind::counter, ranges, {}, scale_for(scale, 160), master_seed,
                           parallelism, false, std::nullopt, out);
            return;
        }
        case 5: {
            const RangeInterval ranges[] = {{0.005, 0.025},
                                            {0.002, 0.005},
                                            {0.001, 0.002},
                                            {0.0005, 0.001},
                                            {0.00005, 0.0005}};
            table_bucketed(NoiseKind::pathological, ranges, {}, scale_for(scale, 300), master_seed,
                           parallelism, true, std::nullopt, out);
            return;
        }
        case 6:
            table_distribution_sweep(scale_for(scale, 22), master_seed, parallelism, trim_extremes,
                                     out);
            return;
        case 7:
            table_size_reduction(scale_for(scale, 60), master_seed, parallelism, out);
            return;
        case 8:
        case 9: {
            const RangeInterval ranges[] = {
                {0.005, 0.025}, {0.002, 0.005}, {0.001, 0.002}, {0.0005, 0.001}};
            table_bucketed(NoiseKind::noisy_input, ranges, input_ps, scale_for(scale, 45),
                           master_seed, parallelism, false, table_id == 8, out);
            return;
        }
        default:
            throw std::invalid_argument("unknown table id (expected 2..9)");
    }
}

}  // namespace noisylearn
