#include "noisylearn/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "noisylearn/dfa.hpp"
#include "noisylearn/dfa_random.hpp"
#include "noisylearn/eld.hpp"
#include "noisylearn/experiment.hpp"
#include "noisylearn/kv_learner.hpp"
#include "noisylearn/oracles.hpp"
#include "noisylearn/rng.hpp"

namespace noisylearn {

namespace {

std::string fmt_number(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.1f", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.8g", v);
    }
    return buf;
}

Word parse_letters(const std::string& text) {
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream s(normalized);
    Word w;
    long v;
    while (s >> v) {
        if (v < 0) throw std::runtime_error("letters must be nonnegative: " + text);
        w.push_back(static_cast<Letter>(v));
    }
    return w;
}

struct DeviceFlags {
    std::string noise = "none";
    double p = 0.005;
    std::uint64_t seed = 0;
    std::string counter_file;
    std::string wa = "0 0 0";

    void add_to(CLI::App& cmd) {
        cmd.add_option("--noise", noise, "Noise kind wrapped around the automaton")
            ->check(CLI::IsMember(
                {"none", "noisy_output", "noisy_input", "counter", "pathological"}));
        cmd.add_option("--p", p, "Noise probability for noisy_output / noisy_input");
        cmd.add_option("--device-seed", seed, "Seed of the device's persistent noise");
        cmd.add_option("--counter", counter_file, "Counter function file for counter noise");
        cmd.add_option("--wa", wa, "Forbidden prefix letters for pathological noise");
    }

    std::unique_ptr<MembershipOracle> wrap(const Dfa& dfa) const {
        switch (parse_noise_kind(noise)) {
            case NoiseKind::none:
                return std::make_unique<DfaOracle>(dfa);
            case NoiseKind::noisy_output:
                return std::make_unique<NoisyOutputDevice>(dfa, p, seed);
            case NoiseKind::noisy_input:
                return std::make_unique<NoisyInputDevice>(dfa, p, seed);
            case NoiseKind::counter:
                if (counter_file.empty())
                    throw std::runtime_error("counter noise needs --counter FILE");
                return std::make_unique<CounterDevice>(dfa, load_counter_function(counter_file));
            case NoiseKind::pathological:
                return std::make_unique<PathologicalDevice>(dfa, parse_letters(wa), seed);
        }
        throw std::logic_error("unreachable");
    }
};

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    return f;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Learning automata from noisy membership oracles"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Emit a random DFA file");
    GenParams gen;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    std::string gen_out_plus;
    bool gen_pathological = false;
    generate->add_option("--seed", gen_seed, "Generator seed")->required();
    generate->add_option("--out", gen_out, "Output DFA file (stdout if omitted)");
    generate->add_option("--min-states", gen.min_states, "Minimum state count");
    generate->add_option("--max-states", gen.max_states, "Maximum state count");
    auto* min_alpha_opt = generate->add_option("--min-alphabet", gen.min_alphabet,
                                               "Minimum alphabet size");
    generate->add_option("--max-alphabet", gen.max_alphabet, "Maximum alphabet size");
    generate->add_flag("--pathological", gen_pathological,
                       "Generate a DFA with a forbidden-prefix sink (alphabet in [5,20])");
    generate->add_option("--out-plus", gen_out_plus,
                         "Also write the variant with the sink accepting");

    // learn
    auto* learn = app.add_subcommand("learn", "Learn a DFA through a noisy membership oracle");
    std::string learn_dfa_file, learn_out, learn_trace;
    DeviceFlags learn_device;
    PacParams learn_pac_params;
    double learn_mu = 0.01;
    std::uint64_t learn_seed = 0;
    learn->add_option("dfa", learn_dfa_file, "Target DFA file")->required();
    learn_device.add_to(*learn);
    learn->add_option("--out", learn_out, "Learned DFA output file");
    learn->add_option("--trace", learn_trace, "Per-round trace CSV (round,states,queries)");
    learn->add_option("--mu", learn_mu, "Stop probability of the word distribution");
    learn->add_option("--epsilon", learn_pac_params.epsilon, "Equivalence error parameter");
    learn->add_option("--delta", learn_pac_params.delta, "Equivalence confidence level");
    learn->add_option("--maxround", learn_pac_params.maxround, "Maximum number of rounds");
    learn->add_option("--seed", learn_seed, "Learner sampling seed");

    // distance
    auto* distance = app.add_subcommand("distance", "Estimate the distance between two automata");
    std::string dist_file1, dist_file2;
    DeviceFlags dist_device;
    StatParams dist_stat;
    double dist_mu = 0.01;
    std::uint64_t dist_seed = 0;
    distance->add_option("first", dist_file1, "First DFA file")->required();
    distance->add_option("second", dist_file2, "Second DFA file (noise flags wrap this side)")
        ->required();
    dist_device.add_to(*distance);
    distance->add_option("--alpha", dist_stat.alpha, "Error parameter");
    distance->add_option("--gamma", dist_stat.gamma, "Confidence level");
    distance->add_option("--mu", dist_mu, "Stop probability of the word distribution");
    distance->add_option("--seed", dist_seed, "Sampling seed");

    // eld-check
    auto* eld = app.add_subcommand("eld-check", "Equal-length-distinguishing check");
    std::string eld_file;
    eld->add_option("dfa", eld_file, "DFA file")->required();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run a configured experiment batch");
    std::string exp_config, exp_out;
    experiment->add_option("config", exp_config, "Experiment config file")->required();
    experiment->add_option("--out", exp_out, "Records CSV output (stdout if omitted)");

    // reproduce-table
    auto* table = app.add_subcommand("reproduce-table", "Reproduce one of the report tables");
    int table_id = 0;
    std::string table_scale = "desk";
    std::string table_out;
    std::uint64_t table_seed = 1;
    std::uint32_t table_parallelism = std::max(1u, std::thread::hardware_concurrency());
    bool table_trim = false;
    table->add_option("id", table_id, "Table id, 2..9")->required();
    table->add_option("--scale", table_scale, "desk or paper (paper needs ~15.2M samples per distance)")
        ->check(CLI::IsMember({"desk", "paper"}));
    table->add_option("--out", table_out, "CSV output (stdout if omitted)");
    table->add_option("--seed", table_seed, "Master seed");
    table->add_option("--parallelism", table_parallelism, "Worker threads");
    table->add_flag("--trim", table_trim, "Drop the best and worst run per cell (table 6)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*generate) {
            if (gen_pathological) {
                // The dead-cone construction needs at least five letters;
                // bump only the default, explicit values must stand.
                if (min_alpha_opt->count() == 0 && gen.min_alphabet < 5) gen.min_alphabet = 5;
                PathologicalDfa pg = random_pathological_dfa(
                    {gen.min_states, gen.max_states, gen.min_alphabet, gen.max_alphabet,
                     gen_seed});
                if (gen_out.empty()) {
                    write_dfa(out, pg.dfa);
                } else {
                    save_dfa(gen_out, pg.dfa);
                }
                if (!gen_out_plus.empty())
                    save_dfa(gen_out_plus, plus_variant(pg.dfa, pg.forbidden_prefix));
                // Keep stdout parseable as a DFA when no --out was given.
                std::ostream& note = gen_out.empty() ? err : out;
                note << "forbidden-prefix";
                for (Letter a : pg.forbidden_prefix) note << ' ' << a;
                note << '\n';
            } else {
                gen.seed = gen_seed;
                Dfa dfa = random_dfa(gen);
                if (gen_out.empty()) {
                    write_dfa(out, dfa);
                } else {
                    save_dfa(gen_out, dfa);
                }
            }
            return 0;
        }

        if (*learn) {
            Dfa target = load_dfa(learn_dfa_file);
            auto device = learn_device.wrap(target);
            WordDistribution dist{learn_mu, target.alphabet_size};
            std::vector<RoundTrace> trace;
            LearnOutcome outcome =
                learn_pac(*device, dist, learn_pac_params, learn_seed, 0,
                          learn_trace.empty() ? nullptr : &trace);
            if (learn_out.empty()) {
                write_dfa(out, outcome.learned);
            } else {
                save_dfa(learn_out, outcome.learned);
            }
            if (!learn_trace.empty()) {
                auto f = open_output(learn_trace);
                f << "round,hypothesis_states,queries\n";
                for (const auto& row : trace)
                    f << row.round << ',' << row.hypothesis_states << ',' << row.queries << '\n';
            }
            out << "rounds " << outcome.rounds_used << " stopped_by "
                << (outcome.stopped_by == StopReason::equivalent ? "equivalent" : "maxround")
                << " states " << outcome.learned.state_count << " queries "
                << outcome.membership_queries << '\n';
            return 0;
        }

        if (*distance) {
            Dfa first = load_dfa(dist_file1);
            Dfa second = load_dfa(dist_file2);
            DfaOracle first_oracle(first);
            auto second_oracle = dist_device.wrap(second);
            WordDistribution dist{dist_mu, first.alphabet_size};
            double d = statistical_distance(first_oracle, *second_oracle, dist, dist_stat,
                                            dist_seed);
            out << fmt_number(d) << '\n';
            return 0;
        }

        if (*eld) {
            Dfa dfa = load_dfa(eld_file);
            auto witness = eld_witness(dfa);
            out << (witness ? "true" : "false") << '\n';
            if (witness)
                out << "witness " << witness->accepting_state << ' ' << witness->rejecting_state
                    << '\n';
            return 0;
        }

        if (*experiment) {
            ExperimentConfig cfg = load_config(exp_config);
            std::ofstream file;
            std::ostream* sink = &out;
            if (!exp_out.empty()) {
                file = open_output(exp_out);
                sink = &file;
            }
            write_records_csv_header(*sink);
            sink->flush();
            // Rows are flushed as soon as every earlier record is done, so
            // an interrupted run keeps the completed prefix.
            std::map<std::uint32_t, ExperimentRecord> pending;
            std::uint32_t cursor = 0;
            run_experiment(cfg, [&](const ExperimentRecord& rec) {
                pending.emplace(rec.dfa_id, rec);
                while (!pending.empty() && pending.begin()->first == cursor) {
                    write_record_csv_row(*sink, pending.begin()->second);
                    sink->flush();
                    pending.erase(pending.begin());
                    ++cursor;
                }
            });
            return 0;
        }

        if (*table) {
            std::ofstream file;
            std::ostream* sink = &out;
            if (!table_out.empty()) {
                file = open_output(table_out);
                sink = &file;
            }
            if (table_scale == "paper")
                err << "note: paper scale draws ~15.2M samples per distance; expect a long run\n";
            reproduce_table(table_id, table_scale == "paper" ? Scale::paper : Scale::desk,
                            table_seed, table_parallelism, table_trim, *sink);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << "usage error: no subcommand\n";
    return 1;
}

}  // namespace noisylearn
