// Command-line driver for the random-singlet chain toolkit.
//
// Physics runs (`run`, `survey`) and statistics (`hist`, `fit`, `compare`)
// are separate subcommands communicating through files, so re-binning and
// refitting never recompute the expensive determinant surveys.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rsc/disorder.hpp"
#include "rsc/ed_oracle.hpp"
#include "rsc/ensemble.hpp"
#include "rsc/entanglement.hpp"
#include "rsc/fermion.hpp"
#include "rsc/io.hpp"
#include "rsc/sdrg.hpp"
#include "rsc/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::string resolve_output(const std::string& out, const std::string& fallback) {
    std::string path = out.empty() ? fallback : out;
    if (std::filesystem::path(path).is_relative()) {
        if (const char* dir = std::getenv("RSC_OUTPUT_DIR"))
            path = (std::filesystem::path(dir) / path).string();
    }
    return path;
}

struct RunOptions {
    double alpha = 0.3;
    double omega0 = 1.0;
    int length = 100;
    std::string boundary = "periodic";
    int n = 1000;
    std::uint64_t seed = 0;
    double window_min = -1.0;  // default L/6
    double window_max = -1.0;  // default L/2
    int workers = 0;
    std::string out;
    std::string format = "csv";
};

int cmd_run(const RunOptions& opt) {
    rsc::EnsembleConfig cfg;
    cfg.dist = {opt.alpha, opt.omega0};
    cfg.length = opt.length;
    cfg.boundary = rsc::boundary_from_string(opt.boundary);
    cfg.n_realizations = opt.n;
    cfg.master_seed = opt.seed;
    cfg.n_workers = opt.workers;

    const double wmin = opt.window_min >= 0 ? opt.window_min : opt.length / 6.0;
    const double wmax = opt.window_max >= 0 ? opt.window_max : opt.length / 2.0;

    const auto result = rsc::run_ensemble(cfg);

    rsc::Provenance prov{{"command", "run"},
                         {"alpha", rsc::format_double(opt.alpha)},
                         {"omega0", rsc::format_double(opt.omega0)},
                         {"length", std::to_string(opt.length)},
                         {"boundary", opt.boundary},
                         {"n_realizations", std::to_string(opt.n)},
                         {"master_seed", std::to_string(opt.seed)},
                         {"window_min", rsc::format_double(wmin)},
                         {"window_max", rsc::format_double(wmax)},
                         {"resampled", std::to_string(result.resampled)},
                         {"failed", std::to_string(result.failed)}};

    const std::string path =
        resolve_output(opt.out, "records.csv");
    if (opt.format == "csv") {
        std::ostringstream os;
        rsc::write_records_csv(os, result.records, prov);
        rsc::write_text_file(path, os.str());
    } else {
        nlohmann::json j;
        j["meta"] = rsc::provenance_json(prov);
        auto& rows = j["records"];
        rows = nlohmann::json::array();
        for (const auto& r : result.records)
            rows.push_back({{"realization", r.realization}, {"left", r.left},
                            {"right", r.right},           {"d", r.distance},
                            {"j_eff", r.j_eff},           {"cxx", r.cxx},
                            {"czz", r.czz},               {"F", r.panel.fidelity},
                            {"N", r.panel.negativity},    {"E", r.panel.log_negativity},
                            {"C", r.panel.concurrence},   {"eof", r.panel.eof}});
        rsc::write_text_file(path, j.dump(2) + "\n");
    }

    int windowed = 0;
    std::vector<double> windowed_f;
    for (const auto& r : result.records)
        if (r.distance >= wmin && r.distance <= wmax) {
            ++windowed;
            windowed_f.push_back(r.panel.fidelity);
        }
    std::cout << "records: " << result.records.size() << " (resampled " << result.resampled
              << ", failed " << result.failed << ")\n";
    std::cout << "windowed fraction (d in [" << wmin << ", " << wmax
              << "]): " << static_cast<double>(windowed) / result.records.size() << "\n";
    if (!windowed_f.empty()) {
        const auto tf = rsc::threshold_fraction(result.records, wmin, wmax, 0.5);
        std::cout << "F > 1/2 fraction (windowed): " << tf.fraction << " +- " << tf.std_error
                  << "\n";
        std::cout << "median F (windowed): " << rsc::median(windowed_f) << "\n";
    }
    std::cout << "wrote " << path << "\n";
    return kExitOk;
}

struct SurveyOptions {
    double alpha = 0.3;
    double omega0 = 1.0;
    int length = 100;
    std::string boundary = "periodic";
    bool clean = false;
    int chains = 1;
    double l_c = -1.0;  // default L/6
    int max_pairs = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_survey(const SurveyOptions& opt) {
    const double l_c = opt.l_c >= 1.0 ? opt.l_c : opt.length / 6.0;
    const rsc::Boundary boundary = rsc::boundary_from_string(opt.boundary);
    if (!opt.clean) rsc::DisorderDistribution{opt.alpha, opt.omega0}.validate();

    std::vector<std::pair<int, std::vector<rsc::SurveyEntry>>> chains;
    const int n_chains = opt.clean ? 1 : opt.chains;
    for (int c = 0; c < n_chains; ++c) {
        const rsc::ChainSpec chain =
            opt.clean ? rsc::clean_chain(opt.length, boundary, opt.omega0)
                      : rsc::sample_chain({opt.alpha, opt.omega0}, opt.length, boundary,
                                          {opt.seed, static_cast<std::uint64_t>(c)});
        chains.emplace_back(c, rsc::all_pairs_survey(chain, l_c, opt.max_pairs));
    }

    rsc::Provenance prov{{"command", "survey"},
                         {"mode", opt.clean ? "clean" : "disordered"},
                         {"alpha", rsc::format_double(opt.clean ? 0.0 : opt.alpha)},
                         {"omega0", rsc::format_double(opt.omega0)},
                         {"length", std::to_string(opt.length)},
                         {"boundary", opt.boundary},
                         {"chains", std::to_string(n_chains)},
                         {"l_c", rsc::format_double(l_c)},
                         {"max_pairs", std::to_string(opt.max_pairs)},
                         {"master_seed", std::to_string(opt.seed)}};
    const std::string path = resolve_output(opt.out, "survey.csv");
    std::ostringstream os;
    rsc::write_survey_csv(os, chains, prov);
    rsc::write_text_file(path, os.str());

    std::size_t n_pairs = 0;
    std::size_t above = 0;
    double max_f = 0.0;
    for (const auto& [id, entries] : chains)
        for (const auto& e : entries) {
            ++n_pairs;
            if (e.fidelity > 0.5) ++above;
            max_f = std::max(max_f, e.fidelity);
        }
    std::cout << "pairs: " << n_pairs << ", F > 1/2: " << above << ", max F: " << max_f << "\n";
    std::cout << "wrote " << path << "\n";
    return kExitOk;
}

std::vector<rsc::RealizationRecord> load_records(const std::string& path) {
    std::istringstream is(rsc::read_text_file(path));
    return rsc::read_records_csv(is);
}

std::vector<double> windowed_fidelities(const std::vector<rsc::RealizationRecord>& records,
                                        double wmin, double wmax) {
    std::vector<double> f;
    for (const auto& r : records) {
        const double lo = wmin >= 0 ? wmin : r.length / 6.0;
        const double hi = wmax >= 0 ? wmax : r.length / 2.0;
        if (r.distance >= lo && r.distance <= hi) f.push_back(r.panel.fidelity);
    }
    return f;
}

int cmd_hist(const std::string& in, const std::string& out, int bins, bool windowed,
             double wmin, double wmax) {
    const auto records = load_records(in);
    std::vector<double> f;
    if (windowed) {
        f = windowed_fidelities(records, wmin, wmax);
    } else {
        for (const auto& r : records) f.push_back(r.panel.fidelity);
    }
    auto h = rsc::histogram(f, bins, 0.0, 1.0);
    h.meta = rsc::provenance_json({{"command", "hist"},
                                   {"input", in},
                                   {"n_bins", std::to_string(bins)},
                                   {"windowed", windowed ? "true" : "false"},
                                   {"n_values", std::to_string(f.size())}});
    const std::string path = resolve_output(out, "hist.json");
    rsc::write_text_file(path, nlohmann::json(h).dump(2) + "\n");
    std::cout << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_fit(const std::string& in, const std::string& out, double d_min) {
    const auto records = load_records(in);
    const auto fit = rsc::fit_gamma(records, d_min);
    nlohmann::json j{{"gamma", fit.gamma},
                     {"intercept", fit.intercept},
                     {"n_points", fit.n_points},
                     {"residual", fit.residual},
                     {"meta", rsc::provenance_json({{"command", "fit"},
                                                    {"input", in},
                                                    {"d_min", rsc::format_double(d_min)}})}};
    const std::string path = resolve_output(out, "fit.json");
    rsc::write_text_file(path, j.dump(2) + "\n");
    std::cout << "gamma: " << fit.gamma << " (bins: " << fit.n_points << ")\n";
    std::cout << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_compare(const std::string& in_a, const std::string& in_b, const std::string& out,
                double wmin, double wmax) {
    const auto fa = windowed_fidelities(load_records(in_a), wmin, wmax);
    const auto fb = windowed_fidelities(load_records(in_b), wmin, wmax);
    const double d = rsc::ks_distance(fa, fb);
    nlohmann::json j{{"ks_distance", d},
                     {"n_a", fa.size()},
                     {"n_b", fb.size()},
                     {"meta", rsc::provenance_json(
                                  {{"command", "compare"}, {"input_a", in_a}, {"input_b", in_b}})}};
    const std::string path = resolve_output(out, "compare.json");
    rsc::write_text_file(path, j.dump(2) + "\n");
    std::cout << "KS D: " << d << " (n_a " << fa.size() << ", n_b " << fb.size() << ")\n";
    std::cout << "wrote " << path << "\n";
    return kExitOk;
}

struct OracleOptions {
    int l_max = 12;
    int per_size = 20;
    std::uint64_t seed = 1;
    bool corrupt_sign = false;  // negative-control hook
};

int cmd_oracle(const OracleOptions& opt) {
    if (opt.l_max > 14) throw rsc::TooLarge("oracle: L > 14 unsupported");
    if (opt.l_max < 4) throw rsc::Error("oracle: need l_max >= 4");

    double worst = 0.0;
    std::string worst_what;
    std::uint64_t realization = 0;

    for (int L = 4; L <= opt.l_max; L += 2) {
        for (auto boundary : {rsc::Boundary::open, rsc::Boundary::periodic}) {
            for (double alpha : {0.0, 0.6}) {
                for (int r = 0; r < opt.per_size; ++r, ++realization) {
                    const auto chain = rsc::sample_chain({alpha, 1.0}, L, boundary,
                                                         {opt.seed, realization});
                    rsc::CorrelationMatrix gm;
                    rsc::DenseGroundState gs;
                    try {
                        gm = rsc::ground_correlation_matrix(chain);
                        gs = rsc::dense_ground_state(chain);
                    } catch (const rsc::DegenerateSpectrum&) {
                        continue;
                    }
                    if (gs.degenerate) continue;

                    auto note = [&](double err, const std::string& what) {
                        if (err > worst) {
                            worst = err;
                            std::ostringstream ss;
                            ss << what << " (L=" << L << ", " << rsc::to_string(boundary)
                               << ", alpha=" << alpha << ", seed=" << chain.stream_seed << ")";
                            worst_what = ss.str();
                        }
                    };
                    note(std::abs(gm.ground_energy - gs.energy), "ground energy");
                    for (int i = 0; i < L; ++i)
                        for (int j = i + 1; j < L; ++j) {
                            const auto fast = rsc::correlation_pair(chain, i, j);
                            const double xx =
                                opt.corrupt_sign ? -fast.cxx : fast.cxx;
                            const auto exact = rsc::exact_correlations(gs, i, j);
                            note(std::abs(xx - exact.cxx), "cxx");
                            note(std::abs(fast.czz - exact.czz), "czz");
                            const auto rho = rsc::reconstruct_state(xx, fast.czz).to_matrix();
                            const auto rho_ed = rsc::exact_pair_state(gs, i, j);
                            note((rho - rho_ed).cwiseAbs().maxCoeff(), "rho_ij");
                        }
                }
            }
        }
    }

    std::cout << "oracle sweep: max error " << worst << " [" << worst_what << "]\n";
    if (worst >= 1e-8) {
        std::cout << "FAIL: tolerance 1e-8 exceeded\n";
        return kExitValidation;
    }
    std::cout << "PASS\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-singlet spin chain toolkit"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Run a disorder ensemble over last decimated pairs");
    run->add_option("--alpha", run_opt.alpha, "Disorder exponent, in [0,1)");
    run->add_option("--omega0", run_opt.omega0, "Energy scale");
    run->add_option("--length,-L", run_opt.length, "Chain length (even)");
    run->add_option("--boundary", run_opt.boundary, "open|periodic");
    run->add_option("--n", run_opt.n, "Number of realizations");
    run->add_option("--seed", run_opt.seed, "Master seed");
    run->add_option("--window-min", run_opt.window_min, "Distance window lower edge");
    run->add_option("--window-max", run_opt.window_max, "Distance window upper edge");
    run->add_option("--workers", run_opt.workers, "Worker threads (0 = auto)");
    run->add_option("--out,-o", run_opt.out, "Output file");
    run->add_option("--format", run_opt.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    SurveyOptions survey_opt;
    auto* survey = app.add_subcommand("survey", "Exact fidelity of all odd-distance pairs");
    survey->add_option("--alpha", survey_opt.alpha, "Disorder exponent");
    survey->add_option("--omega0", survey_opt.omega0, "Energy scale");
    survey->add_option("--length,-L", survey_opt.length, "Chain length (even)");
    survey->add_option("--boundary", survey_opt.boundary, "open|periodic");
    survey->add_flag("--clean", survey_opt.clean, "Uniform couplings J = omega0");
    survey->add_option("--chains", survey_opt.chains, "Number of disordered chains");
    survey->add_option("--lc", survey_opt.l_c, "Distance cutoff (default L/6)");
    survey->add_option("--max-pairs", survey_opt.max_pairs, "Subsample pairs per chain (0 = all)");
    survey->add_option("--seed", survey_opt.seed, "Master seed");
    survey->add_option("--out,-o", survey_opt.out, "Output file");

    std::string hist_in, hist_out;
    int hist_bins = 50;
    bool hist_windowed = false;
    double hist_wmin = -1.0, hist_wmax = -1.0;
    auto* hist = app.add_subcommand("hist", "Fidelity histogram from a records file");
    hist->add_option("--in,-i", hist_in, "Records CSV")->required();
    hist->add_option("--out,-o", hist_out, "Output JSON");
    hist->add_option("--bins", hist_bins, "Bin count");
    hist->add_flag("--windowed", hist_windowed, "Keep only d in the window");
    hist->add_option("--window-min", hist_wmin, "Window lower edge (default L/6)");
    hist->add_option("--window-max", hist_wmax, "Window upper edge (default L/2)");

    std::string fit_in, fit_out;
    double fit_dmin = 10.0;
    auto* fit = app.add_subcommand("fit", "Fit gamma from ln(j_eff) vs sqrt(d)");
    fit->add_option("--in,-i", fit_in, "Records CSV")->required();
    fit->add_option("--out,-o", fit_out, "Output JSON");
    fit->add_option("--dmin", fit_dmin, "Minimum distance used in the fit");

    std::string cmp_a, cmp_b, cmp_out;
    double cmp_wmin = -1.0, cmp_wmax = -1.0;
    auto* compare = app.add_subcommand("compare", "Two-sample KS distance of windowed fidelities");
    compare->add_option("--a", cmp_a, "Records CSV A")->required();
    compare->add_option("--b", cmp_b, "Records CSV B")->required();
    compare->add_option("--out,-o", cmp_out, "Output JSON");
    compare->add_option("--window-min", cmp_wmin, "Window lower edge (default L/6)");
    compare->add_option("--window-max", cmp_wmax, "Window upper edge (default L/2)");

    OracleOptions oracle_opt;
    auto* oracle = app.add_subcommand("oracle", "Cross-check the fermion solver against dense ED");
    oracle->add_option("--lmax", oracle_opt.l_max, "Largest chain length in the sweep");
    oracle->add_option("--per-size", oracle_opt.per_size, "Realizations per (L, boundary, alpha)");
    oracle->add_option("--seed", oracle_opt.seed, "Master seed");
    oracle->add_flag("--corrupt-sign", oracle_opt.corrupt_sign)->group("");  // test hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_opt);
        if (*survey) return cmd_survey(survey_opt);
        if (*hist) return cmd_hist(hist_in, hist_out, hist_bins, hist_windowed, hist_wmin,
                                   hist_wmax);
        if (*fit) return cmd_fit(fit_in, fit_out, fit_dmin);
        if (*compare) return cmd_compare(cmp_a, cmp_b, cmp_out, cmp_wmin, cmp_wmax);
        if (*oracle) return cmd_oracle(oracle_opt);
    } catch (const rsc::TooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rsc::Error& e) {
        const std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        if (what.find("cannot open") != std::string::npos ||
            what.find("write failed") != std::string::npos)
            return kExitIo;
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
