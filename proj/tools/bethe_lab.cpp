// Copyright 2026 The bethe-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// bethe-lab: command-line front end producing the tables, figure data and
// diagnostics of the library, each run recorded in a JSON manifest.

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bethe.hpp"

#ifndef BETHE_LAB_VERSION
#define BETHE_LAB_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bethe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitComputation = 2;
constexpr int kExitCrossCheck = 3;
constexpr std::uint64_t kDefaultSeed = 20220707;

struct CrossCheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string &data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

struct Globals {
    std::string out_dir = ".";
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = std::max(1U, std::thread::hardware_concurrency());
    std::size_t memory_budget = EmulatorOptions{}.memory_budget;
};

/// Collects outputs and parameters for the manifest of one command.
class Run {
   public:
    Run(std::string command, const Globals &g) : command_(std::move(command)), g_(g) {
        start_ = std::chrono::steady_clock::now();
    }

    json params = json::object();

    void write(const std::string &name, const std::string &content) {
        fs::create_directories(g_.out_dir);
        const fs::path path = fs::path(g_.out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        f << content;
        if (!f) {
            throw std::runtime_error("cannot write " + path.string());
        }
        outputs_.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }

    void finish(int exit_code, const std::string &message) const {
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json m;
        m["command"] = command_;
        m["params"] = params;
        m["seed"] = g_.seed;
        m["threads"] = g_.threads;
        m["memory_budget"] = g_.memory_budget;
        m["version"] = BETHE_LAB_VERSION;
        m["duration_seconds"] = seconds;
        m["outputs"] = outputs_;
        m["exit_code"] = exit_code;
        if (!message.empty()) {
            m["message"] = message;
        }
        fs::create_directories(g_.out_dir);
        std::ofstream f(fs::path(g_.out_dir) / (command_ + "_manifest.json"));
        f << m.dump(2) << '\n';
    }

   private:
    std::string command_;
    const Globals &g_;
    std::chrono::steady_clock::time_point start_;
    json outputs_ = json::array();
};

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::vector<int> parse_int_list(const std::string &s) {
    std::vector<int> out;
    for (const auto &t : split(s, ',')) {
        const auto dash = t.find('-', 1);
        if (dash != std::string::npos) {
            const int a = std::stoi(t.substr(0, dash));
            const int b = std::stoi(t.substr(dash + 1));
            for (int v = a; v <= b; v += 2) {
                out.push_back(v);
            }
        } else {
            out.push_back(std::stoi(t));
        }
    }
    return out;
}

std::string counting_set_string(const std::vector<CountingNumber> &c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        s += (i ? " " : "") + c[i].to_string();
    }
    return s;
}

std::string real_list(const std::vector<double> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? " " : "") + io::csv_real(v[i]);
    }
    return s;
}

/// Options shared by commands that act on one Bethe state.
struct StateSpec {
    int L = 0;
    int M = -1;
    std::string counting;
    bool ground = false;
    bool lowest = false;
    std::string roots_file;

    void add_to(CLI::App *cmd) {
        cmd->add_option("--L", L, "chain length (even)");
        cmd->add_option("--M", M, "magnon number");
        cmd->add_option("--counting-numbers", counting,
                        "comma separated counting numbers, e.g. --counting-numbers=-1/2,1/2");
        cmd->add_flag("--ground", ground, "antiferromagnetic ground state (M = L/2)");
        cmd->add_flag("--lowest-energy", lowest, "lowest-energy real solution for (L, M)");
        cmd->add_option("--roots", roots_file, "root-set JSON written by solve");
    }

    json to_json() const {
        return {{"L", L}, {"M", M}, {"counting_numbers", counting}, {"ground", ground}, {"lowest_energy", lowest},
                {"roots", roots_file}};
    }

    BetheRootSet resolve() const {
        const int choices = (ground ? 1 : 0) + (lowest ? 1 : 0) + (counting.empty() ? 0 : 1) + (roots_file.empty() ? 0 : 1);
        if (choices != 1) {
            throw std::invalid_argument(
                "choose exactly one of --ground, --lowest-energy, --counting-numbers or --roots");
        }
        if (!roots_file.empty()) {
            std::ifstream f(roots_file);
            if (!f) {
                throw std::invalid_argument("cannot read " + roots_file);
            }
            return io::roots_from_json(json::parse(f));
        }
        if (L <= 0) {
            throw std::invalid_argument("--L is required");
        }
        if (ground) {
            return ground_state(L);
        }
        if (lowest) {
            if (M < 0) {
                throw std::invalid_argument("--lowest-energy needs --M");
            }
            return lowest_energy_solution(L, M);
        }
        std::vector<CountingNumber> c;
        for (const auto &t : split(counting, ',')) {
            c.push_back(CountingNumber::parse(t));
        }
        if (M >= 0 && static_cast<int>(c.size()) != M) {
            throw std::invalid_argument("--M does not match the number of counting numbers");
        }
        std::sort(c.begin(), c.end());
        return solve_by_counting_numbers(L, c);
    }
};

json roots_summary(const BetheRootSet &r) {
    return json::parse(io::roots_to_json(r));
}

// ---------------------------------------------------------------------------

int cmd_solve(Run &run, const StateSpec &spec) {
    run.params = spec.to_json();
    const auto roots = spec.resolve();
    run.write("roots.json", io::roots_to_json(roots) + "\n");
    std::printf("L=%d M=%d I={%s}\n", roots.chain_length(), roots.magnons(),
                counting_set_string(roots.counting_numbers()).c_str());
    std::printf("k = %s\n", real_list(roots.sorted_momenta()).c_str());
    std::printf("energy = %s\nresidual = %s\n", io::csv_real(roots.energy()).c_str(),
                io::csv_real(roots.residual()).c_str());
    return kExitOk;
}

int cmd_enumerate(Run &run, int L, int M, std::size_t max_sets) {
    run.params = {{"L", L}, {"M", M}, {"max_sets", max_sets}};
    EnumerationStats stats;
    const auto sols = enumerate_real_solutions(L, M, max_sets, &stats);
    std::ostringstream csv;
    csv << "L,M,I_set,k,energy,alpha2,residual\n";
    for (const auto &s : sols) {
        const auto rep = success_probability(s);
        csv << L << ',' << M << ',' << counting_set_string(s.counting_numbers()) << ',' << real_list(s.momenta()) << ','
            << io::csv_real(s.energy()) << ',' << io::csv_real(rep.success_probability) << ','
            << io::csv_real(s.residual()) << '\n';
    }
    run.write("enumerate.csv", csv.str());
    run.params["stats"] = {{"candidates", stats.candidates},   {"solved", stats.solved},
                           {"solver_failures", stats.solver_failures}, {"not_real", stats.not_real},
                           {"duplicates", stats.duplicates}};
    std::printf("%zu real solutions from %zu candidate sets (%zu solver failures, %zu not real, %zu duplicates)\n",
                sols.size(), stats.candidates, stats.solver_failures, stats.not_real, stats.duplicates);
    return kExitOk;
}

int cmd_success(Run &run, const StateSpec &spec) {
    run.params = spec.to_json();
    const auto roots = spec.resolve();
    const auto rep = success_probability(roots);
    json out = roots_summary(roots);
    out["alpha2"] = rep.success_probability;
    out["ln_alpha2"] = rep.log_success_probability;
    out["log_det_G"] = rep.log_determinant;
    out["alpha2_times_M_factorial"] = rep.ratio_to_factorial_bound;
    out["delta"] = rep.delta;
    run.write("success.json", out.dump(2) + "\n");
    std::printf("|alpha|^2 = %s\nln|alpha|^2 = %s\ndelta = %s\n", io::csv_real(rep.success_probability).c_str(),
                io::csv_real(rep.log_success_probability).c_str(), io::csv_real(rep.delta).c_str());
    return kExitOk;
}

struct Table1Row {
    int L;
    std::vector<CountingNumber> counting;
};

std::vector<Table1Row> table1_rows() {
    auto h = [](std::initializer_list<int> twice) {
        std::vector<CountingNumber> c;
        for (int t : twice) {
            c.push_back(CountingNumber::from_twice(t));
        }
        return c;
    };
    return {{4, h({-1, 1})}, {6, h({1, 3})}, {6, h({-2, 0, 2})}, {8, h({-3, -1, 1, 3})}};
}

int cmd_table1(Run &run, const Globals &g) {
    std::ostringstream csv;
    csv << "L,M,I_set,k,alpha2,alpha2_emulated\n";
    bool ok = true;
    for (const auto &row : table1_rows()) {
        const auto roots = solve_by_counting_numbers(row.L, row.counting);
        const double a = success_probability(roots).success_probability;
        EmulatorOptions opt;
        opt.memory_budget = g.memory_budget;
        const auto emu = run_algorithm(roots, opt);
        ok = ok && std::abs(emu.accept_probability - a) <= 1e-9 && emu.overlap_with_target >= 1.0 - 1e-9;
        csv << row.L << ',' << roots.magnons() << ',' << counting_set_string(roots.counting_numbers()) << ','
            << real_list(roots.sorted_momenta()) << ',' << io::csv_real(a) << ','
            << io::csv_real(emu.accept_probability) << '\n';
    }
    run.write("table1.csv", csv.str());
    std::cout << csv.str();
    if (!ok) {
        throw CrossCheckFailure("emulated acceptance disagrees with the Gaudin formula");
    }
    return kExitOk;
}

std::uint64_t pinned_shots(int L) {
    switch (L) {
        case 4:
            return 20000;
        case 6:
            return 64000;
        case 8:
            return 280000;
        default:
            return 0;
    }
}

int cmd_table2(Run &run, const Globals &g, const std::vector<int> &lengths, bool exact_only, double epsilon,
               int trials, bool pin_n, bool averaged) {
    run.params = {{"L", lengths}, {"exact_only", exact_only}, {"epsilon", epsilon}, {"trials", trials},
                  {"pin_n", pin_n}, {"translation_averaged", averaged}};
    std::ostringstream exact_csv;
    exact_csv << "L,l,value\n";
    std::ostringstream shots_csv;
    shots_csv << "L,l,mean,std,N,trials,seed\n";
    double worst = 0.0;
    for (int L : lengths) {
        const auto roots = ground_state(L);
        const auto bethe = normalize(build_bethe_state(roots));
        const auto ed = ground_eigenpair(build_hamiltonian(L, L / 2)).state;
        std::vector<int> seps;
        for (int l = 1; l <= L / 2; ++l) {
            const double a = exact_correlator(bethe, l);
            worst = std::max(worst, std::abs(a - exact_correlator(ed, l)));
            exact_csv << L << ',' << l << ',' << io::csv_real(a) << '\n';
            seps.push_back(l);
        }
        if (exact_only) {
            continue;
        }
        ExperimentConfig cfg;
        cfg.epsilon = epsilon;
        cfg.trials = trials;
        cfg.seed = g.seed;
        cfg.separations = seps;
        cfg.shots = pin_n ? pinned_shots(L) : 0;
        cfg.mode = averaged ? EstimatorMode::TranslationAveraged : EstimatorMode::SiteZero;
        const auto e = run_experiment(roots, cfg, g.threads);
        for (const auto &s : e.summary) {
            shots_csv << L << ',' << s.l << ',' << io::csv_real(s.mean) << ',' << io::csv_real(s.stddev) << ','
                      << e.shots << ',' << s.valid_trials << ',' << g.seed << '\n';
        }
    }
    run.write("table2_exact.csv", exact_csv.str());
    std::cout << exact_csv.str();
    if (!exact_only) {
        run.write("table2_shots.csv", shots_csv.str());
        std::cout << shots_csv.str();
    }
    run.params["max_route_disagreement"] = worst;
    if (worst > 1e-10) {
        throw CrossCheckFailure("Bethe-state and exact-diagonalisation correlators disagree by " +
                                io::csv_real(worst));
    }
    return kExitOk;
}

int cmd_fig2(Run &run, const std::vector<int> &ms, const std::vector<int> &lengths) {
    run.params = {{"M", ms}, {"L", lengths}};
    std::ostringstream csv;
    csv << "M,L,alpha2\n";
    json gaps = json::array();
    for (int M : ms) {
        std::vector<int> valid;
        for (int L : lengths) {
            if (L >= 2 * M) {
                valid.push_back(L);
            }
        }
        for (const auto &row : large_l_scan(M, valid)) {
            if (row.solved) {
                csv << M << ',' << row.L << ',' << io::csv_real(row.alpha2) << '\n';
            } else {
                gaps.push_back({{"M", M}, {"L", row.L}, {"reason", row.failure}});
            }
        }
    }
    run.params["gaps"] = gaps;
    run.write("fig2.csv", csv.str());
    std::cout << csv.str();
    return kExitOk;
}

int cmd_fig3(Run &run, const std::vector<int> &lengths, double epsilon) {
    run.params = {{"L", lengths}, {"epsilon", epsilon}};
    const auto scan = ground_state_probability_scan(lengths);
    std::ostringstream csv;
    csv << "L,alpha2,ln_alpha2\n";
    for (const auto &r : scan.rows) {
        csv << r.L << ',' << io::csv_real(r.alpha2) << ',' << io::csv_real(r.ln_alpha2) << '\n';
    }
    run.write("fig3.csv", csv.str());
    std::cout << csv.str();
    const auto &last = scan.rows.back();
    const auto amp = amplification_iterations(last.alpha2);
    const double n_max = plan_shots_real(last.alpha2, epsilon);
    run.params["fit"] = {{"slope", scan.fit.slope}, {"intercept", scan.fit.intercept}, {"r_squared", scan.fit.r_squared}};
    run.params["largest_L"] = {{"L", last.L}, {"N_max", n_max}, {"amplification_iterations", amp.iterations}};
    std::printf("fit: ln|alpha|^2 = %s + %s L (R^2 = %s)\n", io::csv_real(scan.fit.intercept).c_str(),
                io::csv_real(scan.fit.slope).c_str(), io::csv_real(scan.fit.r_squared).c_str());
    std::printf("L=%d: N_max = %s, amplification iterations m = %llu\n", last.L, io::csv_real(n_max).c_str(),
                static_cast<unsigned long long>(amp.iterations));
    return kExitOk;
}

int cmd_measure(Run &run, const Globals &g, const std::string &config_path) {
    std::ifstream f(config_path);
    if (!f) {
        throw std::invalid_argument("cannot read " + config_path);
    }
    const json cfg_json = json::parse(f);
    run.params = cfg_json;
    const int L = cfg_json.at("L").get<int>();
    ExperimentConfig cfg;
    cfg.epsilon = cfg_json.value("epsilon", 0.01);
    cfg.trials = cfg_json.value("trials", 100);
    cfg.seed = cfg_json.value("seed", g.seed);
    if (cfg_json.contains("separations")) {
        cfg.separations = cfg_json.at("separations").get<std::vector<int>>();
    } else {
        for (int l = 1; l <= L / 2; ++l) {
            cfg.separations.push_back(l);
        }
    }
    if (cfg_json.contains("pinN")) {
        const auto &p = cfg_json.at("pinN");
        cfg.shots = p.is_boolean() ? (p.get<bool>() ? pinned_shots(L) : 0) : p.get<std::uint64_t>();
    }
    const auto roots = ground_state(L);
    const auto e = run_experiment(roots, cfg, g.threads);
    const auto exact_state = normalize(build_bethe_state(roots));
    std::ostringstream summary;
    summary << "L,l,exact,mean,std,N,trials,seed\n";
    for (const auto &s : e.summary) {
        summary << L << ',' << s.l << ',' << io::csv_real(exact_correlator(exact_state, s.l)) << ','
                << io::csv_real(s.mean) << ',' << io::csv_real(s.stddev) << ',' << e.shots << ',' << s.valid_trials
                << ',' << cfg.seed << '\n';
    }
    std::ostringstream trials;
    trials << "trial,accepted,rejected";
    for (int l : cfg.separations) {
        trials << ",l" << l;
    }
    trials << '\n';
    for (std::size_t t = 0; t < e.trials.size(); ++t) {
        const auto &tr = e.trials[t];
        trials << t << ',' << tr.accepted << ',' << tr.rejected;
        for (const auto &v : tr.estimates) {
            trials << ',' << (v ? io::csv_real(*v) : std::string());
        }
        trials << '\n';
    }
    run.write("measure.csv", summary.str());
    run.write("measure_trials.csv", trials.str());
    std::cout << summary.str();
    return kExitOk;
}

int cmd_emulate(Run &run, const Globals &g, const StateSpec &spec, std::uint64_t shots, bool gram_schmidt) {
    run.params = spec.to_json();
    run.params["shots"] = shots;
    run.params["completion"] = gram_schmidt ? "gram-schmidt" : "householder";
    const auto roots = spec.resolve();
    EmulatorOptions opt;
    opt.memory_budget = g.memory_budget;
    opt.completion = gram_schmidt ? Completion::GramSchmidt : Completion::Householder;
    opt.completion_seed = g.seed;
    const auto r = run_algorithm(roots, opt);
    const double formula = success_probability(roots).success_probability;
    const double deviation = projected_amplitude_check(roots, opt);
    json out = roots_summary(roots);
    out["accept_probability"] = r.accept_probability;
    out["formula_probability"] = formula;
    out["overlap_with_target"] = r.overlap_with_target;
    out["projected_block_deviation"] = deviation;
    out["step_norms"] = r.step_norms;
    out["label_unitary_defect"] = r.label_unitary_defect;
    out["uniform_unitary_defect"] = r.uniform_unitary_defect;
    run.write("emulate.json", out.dump(2) + "\n");
    if (shots > 0) {
        std::ostringstream csv;
        io::write_shot_counts_csv(csv, sample_shots(roots, shots, g.seed, g.threads));
        run.write("shots.csv", csv.str());
    }
    std::printf("accept probability = %s (formula %s)\noverlap with target = %s\nblock deviation = %s\n",
                io::format_real(r.accept_probability, 15).c_str(), io::format_real(formula, 15).c_str(),
                io::format_real(r.overlap_with_target, 15).c_str(), io::format_real(deviation, 3).c_str());
    if (std::abs(r.accept_probability - formula) > 1e-9 || r.overlap_with_target < 1.0 - 1e-9 || deviation > 1e-9) {
        throw CrossCheckFailure("emulator disagrees with the analytic state");
    }
    return kExitOk;
}

int cmd_oracle(Run &run, int L, int M, bool write_spectrum) {
    run.params = {{"L", L}, {"M", M}, {"spectrum", write_spectrum}};
    const auto h = build_hamiltonian(L, M);
    const auto ev = spectrum(h);
    json out = {{"L", L}, {"M", M}, {"dimension", h.basis->size()}, {"ground_energy", ev[0]}};
    bool ok = true;
    if (M >= 1 && 2 * M <= L && L % 2 == 0) {
        const auto low = lowest_energy_solution(L, M);
        const auto res = eigen_residual(h, build_bethe_state(low), low.energy());
        out["bethe_lowest_real_energy"] = low.energy();
        out["bethe_eigen_residual"] = res;
        ok = res <= 1e-9;
        if (2 * M == L) {
            out["ground_energy_difference"] = std::abs(low.energy() - ev[0]);
            ok = ok && std::abs(low.energy() - ev[0]) <= 1e-9;
        }
    }
    run.write("oracle.json", out.dump(2) + "\n");
    if (write_spectrum) {
        std::ostringstream csv;
        csv << "index,energy\n";
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            csv << i << ',' << io::csv_real(ev[i]) << '\n';
        }
        run.write("oracle_spectrum.csv", csv.str());
    }
    std::cout << out.dump(2) << '\n';
    if (!ok) {
        throw CrossCheckFailure("Bethe state is not an eigenvector of the sector Hamiltonian");
    }
    return kExitOk;
}

int cmd_conjectures(Run &run, int max_l, const std::vector<int> &exceptional) {
    run.params = {{"max_L", max_l}, {"exceptional", exceptional}};
    std::vector<ConjectureRecord> records;
    EnumerationStats stats;
    if (!exceptional.empty()) {
        if (exceptional.size() != 2) {
            throw std::invalid_argument("--exceptional takes L and M");
        }
        records.push_back(exceptional_state_probe(exceptional[0], exceptional[1]));
    } else {
        records = conjecture_scan(max_l, &stats);
    }
    std::ostringstream csv;
    csv << "L,M,I_set,alpha2,delta,c0_holds,c1_holds,c2_holds,detG_positive,residual\n";
    std::size_t c0_fail = 0, c1_fail = 0, det_fail = 0;
    for (const auto &r : records) {
        c0_fail += r.c0_holds ? 0 : 1;
        c1_fail += r.c1_holds ? 0 : 1;
        det_fail += r.det_positive ? 0 : 1;
        csv << r.L << ',' << r.M << ',' << counting_set_string(r.counting_numbers) << ',' << io::csv_real(r.alpha2)
            << ',' << io::csv_real(r.delta) << ',' << (r.c0_holds ? "true" : "false") << ','
            << (r.c1_holds ? "true" : "false") << ',' << (r.c2_holds ? "true" : "false") << ','
            << (r.det_positive ? "true" : "false") << ',' << io::csv_real(r.residual) << '\n';
    }
    run.write("conjectures.csv", csv.str());
    run.params["summary"] = {{"states", records.size()}, {"c0_violations", c0_fail}, {"c1_violations", c1_fail},
                             {"det_nonpositive", det_fail}};
    if (exceptional.empty()) {
        std::printf("%zu states: %zu violate det G <= L!M!/(L-M)!, %zu have det G <= 0, %zu exceed 1/M!\n",
                    records.size(), c0_fail, det_fail, c1_fail);
    } else {
        std::cout << csv.str();
    }
    if (c0_fail != 0 || det_fail != 0) {
        throw CrossCheckFailure("physical bound on the Gaudin determinant violated");
    }
    return kExitOk;
}

int cmd_dump_state(Run &run, const StateSpec &spec, bool rescaled, bool normalized) {
    run.params = spec.to_json();
    run.params["rescaled"] = rescaled;
    run.params["normalized"] = normalized;
    const auto roots = spec.resolve();
    auto psi = rescaled ? build_rescaled_state(roots) : build_bethe_state(roots);
    if (normalized) {
        psi = normalize(psi);
    }
    run.write("state.json", io::state_to_json(psi).dump() + "\n");
    std::printf("wrote %zu amplitudes, norm^2 = %s\n", psi.size(), io::csv_real(psi.norm_squared()).c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Bethe-state preparation lab: solver, success probabilities, emulator and correlators"};
    app.set_version_flag("--version", BETHE_LAB_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--out-dir", g.out_dir, "directory for outputs and the run manifest")->capture_default_str();
    app.add_option("--seed", g.seed, "RNG seed for randomized commands")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--memory-budget", g.memory_budget, "max composite amplitudes in the emulator")
        ->capture_default_str();

    StateSpec solve_spec, success_spec, emulate_spec, dump_spec;
    auto *solve = app.add_subcommand("solve", "solve the Bethe equations for one state");
    solve_spec.add_to(solve);

    int en_L = 0, en_M = 0;
    std::size_t en_max = 0;
    auto *enumerate = app.add_subcommand("enumerate", "all real solutions for (L, M)");
    enumerate->add_option("--L", en_L)->required();
    enumerate->add_option("--M", en_M)->required();
    enumerate->add_option("--max-sets", en_max, "cap on candidate counting sets tried (0 = all)");

    auto *success = app.add_subcommand("success", "exact success probability of one state");
    success_spec.add_to(success);

    auto *table1 = app.add_subcommand("table1", "success probabilities of the four reference states");

    std::string t2_lengths = "4,6,8";
    bool t2_exact = false, t2_pin = false, t2_avg = false;
    double t2_eps = 0.01;
    int t2_trials = 100;
    auto *table2 = app.add_subcommand("table2", "ground-state correlators, exact and from shots");
    table2->add_option("--L", t2_lengths, "comma separated chain lengths")->capture_default_str();
    table2->add_flag("--exact", t2_exact, "exact values only");
    table2->add_option("--epsilon", t2_eps)->capture_default_str();
    table2->add_option("--trials", t2_trials)->capture_default_str();
    table2->add_flag("--pin-n", t2_pin, "use N = 2e4, 6.4e4, 2.8e5 for L = 4, 6, 8 instead of ceil(N_max)");
    table2->add_flag("--translation-averaged", t2_avg, "average sigma-z pairs over all sites within a shot");

    std::string f2_m = "1,2,3,4", f2_l = "2-40";
    auto *fig2 = app.add_subcommand("fig2", "success probability of low-energy states versus L");
    fig2->add_option("--M", f2_m)->capture_default_str();
    fig2->add_option("--L", f2_l, "even lengths: list or range a-b")->capture_default_str();

    std::string f3_l = "4-40";
    double f3_eps = 0.01;
    auto *fig3 = app.add_subcommand("fig3", "log success probability of ground states versus L");
    fig3->add_option("--L", f3_l)->capture_default_str();
    fig3->add_option("--epsilon", f3_eps)->capture_default_str();

    std::string measure_config;
    auto *measure = app.add_subcommand("measure", "shot experiment from a JSON configuration");
    measure->add_option("--config", measure_config, "{L, epsilon, trials, seed, separations, pinN}")->required();

    std::uint64_t em_shots = 0;
    bool em_gs = false;
    auto *emulate = app.add_subcommand("emulate", "register-level emulation of the preparation circuit");
    emulate_spec.add_to(emulate);
    emulate->add_option("--shots", em_shots, "also sample this many shots");
    emulate->add_flag("--gram-schmidt", em_gs, "complete label unitaries by Gram-Schmidt");

    int or_L = 0, or_M = -1;
    bool or_spec = false;
    auto *oracle = app.add_subcommand("oracle", "exact diagonalisation of one magnon sector");
    oracle->add_option("--L", or_L)->required();
    oracle->add_option("--M", or_M, "magnon number (default L/2)");
    oracle->add_flag("--spectrum", or_spec, "write the full sector spectrum");

    int cj_max = 14;
    std::vector<int> cj_exc;
    auto *conjectures = app.add_subcommand("conjectures", "Gaudin determinant bounds over real-root states");
    conjectures->add_option("--max-L", cj_max)->capture_default_str();
    conjectures->add_option("--exceptional", cj_exc, "probe equally spaced counting numbers at L M")->expected(2);

    bool ds_rescaled = false, ds_normalized = false;
    auto *dump = app.add_subcommand("dump-state", "write state amplitudes as JSON");
    dump_spec.add_to(dump);
    dump->add_flag("--rescaled", ds_rescaled, "multiply by the bracket product");
    dump->add_flag("--normalized", ds_normalized, "normalise to unit norm");

    CLI11_PARSE(app, argc, argv);

    CLI::App *chosen = app.get_subcommands().front();
    Run run(chosen->get_name(), g);
    int code = kExitOk;
    std::string message;
    try {
        if (chosen == solve) {
            code = cmd_solve(run, solve_spec);
        } else if (chosen == enumerate) {
            code = cmd_enumerate(run, en_L, en_M, en_max);
        } else if (chosen == success) {
            code = cmd_success(run, success_spec);
        } else if (chosen == table1) {
            code = cmd_table1(run, g);
        } else if (chosen == table2) {
            code = cmd_table2(run, g, parse_int_list(t2_lengths), t2_exact, t2_eps, t2_trials, t2_pin, t2_avg);
        } else if (chosen == fig2) {
            code = cmd_fig2(run, parse_int_list(f2_m), parse_int_list(f2_l));
        } else if (chosen == fig3) {
            code = cmd_fig3(run, parse_int_list(f3_l), f3_eps);
        } else if (chosen == measure) {
            code = cmd_measure(run, g, measure_config);
        } else if (chosen == emulate) {
            code = cmd_emulate(run, g, emulate_spec, em_shots, em_gs);
        } else if (chosen == oracle) {
            code = cmd_oracle(run, or_L, or_M < 0 ? or_L / 2 : or_M, or_spec);
        } else if (chosen == conjectures) {
            code = cmd_conjectures(run, cj_max, cj_exc);
        } else if (chosen == dump) {
            code = cmd_dump_state(run, dump_spec, ds_rescaled, ds_normalized);
        }
    } catch (const CrossCheckFailure &e) {
        code = kExitCrossCheck;
        message = e.what();
    } catch (const std::exception &e) {
        code = kExitComputation;
        message = e.what();
    }
    if (!message.empty()) {
        std::fprintf(stderr, "bethe-lab %s: %s\n", chosen->get_name().c_str(), message.c_str());
    }
    run.finish(code, message);
    return code;
}
