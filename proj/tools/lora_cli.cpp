// Command-line frontend: SER/FER sweeps, required-SNR searches, and
// interference-pattern dumps, emitted as CSV for downstream plotting.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lora/awgn_rates.hpp"
#include "lora/channel.hpp"
#include "lora/interf_rates.hpp"
#include "lora/mc.hpp"
#include "lora/pattern.hpp"
#include "lora/phy.hpp"

using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// "a:b:step" (inclusive, step > 0) or a comma-separated list
std::vector<double> parse_grid(const std::string& text, bool allow_inf) {
    auto parse_one = [&](const std::string& tok) {
        if (allow_inf && (tok == "inf" || tok == "+inf"))
            return std::numeric_limits<double>::infinity();
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw CLI::ValidationError("bad number '" + tok + "'");
        return v;
    };
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double a, b, step;
        char c1, c2;
        std::istringstream is(text);
        if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !is.eof())
            throw CLI::ValidationError("grid must be start:stop:step, got '" + text + "'");
        if (step <= 0.0) throw CLI::ValidationError("grid step must be positive");
        if (a > b) throw CLI::ValidationError("grid start exceeds stop");
        long count = long(std::floor((b - a) / step + 1e-9)) + 1;
        for (long i = 0; i < count; ++i) out.push_back(a + double(i) * step);
    } else {
        std::istringstream is(text);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (!tok.empty()) out.push_back(parse_one(tok));
        }
    }
    if (out.empty()) throw CLI::ValidationError("empty grid '" + text + "'");
    return out;
}

std::vector<int> parse_sf_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_grid(text, false)) {
        int sf = int(std::llround(v));
        if (std::abs(v - sf) > 1e-9) throw CLI::ValidationError("sf must be an integer");
        out.push_back(sf);
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

void require_methods(const std::vector<std::string>& methods,
                     const std::vector<std::string>& allowed) {
    for (const auto& m : methods)
        if (std::find(allowed.begin(), allowed.end(), m) == allowed.end())
            throw CLI::ValidationError("unknown method '" + m + "'");
}

struct Row {
    int sf;
    double snr_db;
    bool sir_inf;
    double sir_db;
    std::string metric;
    std::string method;
    double value;
    std::optional<double> ci95;
    std::optional<std::uint64_t> trials;
};

struct Output {
    std::string out_path;
    std::string meta_path;
    json meta;

    void write(const std::string& body) const {
        if (out_path.empty()) {
            std::cout << body;
        } else {
            std::ofstream f(out_path);
            if (!f) throw std::runtime_error("cannot open " + out_path);
            f << body;
        }
        if (!meta_path.empty()) {
            std::ofstream f(meta_path);
            if (!f) throw std::runtime_error("cannot open " + meta_path);
            f << meta.dump(2) << "\n";
        }
    }
};

void emit_rows(std::vector<Row> rows, const Output& out) {
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.sf, a.snr_db, a.method) < std::tie(b.sf, b.snr_db, b.method);
    });
    std::ostringstream os;
    os << "sf,snr_db,sir_db,metric,method,value,ci95,trials\n";
    for (const Row& r : rows) {
        os << r.sf << ',' << fmt(r.snr_db) << ','
           << (r.sir_inf ? "inf" : fmt(r.sir_db)) << ',' << r.metric << ','
           << r.method << ',' << fmt(r.value) << ','
           << (r.ci95 ? fmt(*r.ci95) : "") << ','
           << (r.trials ? std::to_string(*r.trials) : "") << '\n';
    }
    out.write(os.str());
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("LORA_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return int(std::max(1u, std::thread::hardware_concurrency()));
}

struct CommonOpts {
    std::string out_path;
    std::string meta_path;
    int threads = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--out", out_path, "write CSV to this file instead of stdout");
        cmd->add_option("--json-meta", meta_path, "write the resolved run config as JSON");
        cmd->add_option("--threads", threads, "worker threads (default: LORA_THREADS or all)");
    }
};

json meta_base(const std::string& command, const CommonOpts& common) {
    json m;
    m["command"] = command;
    m["out"] = common.out_path;
    m["threads"] = resolve_threads(common.threads);
    return m;
}

lora::McConfig make_mc_config(double trials, std::uint64_t seed, double tau_step,
                              const std::string& omega, int threads) {
    lora::McConfig cfg;
    if (trials < 1.0) throw CLI::ValidationError("--trials must be at least 1");
    cfg.trials = std::uint64_t(std::llround(trials));
    cfg.seed = seed;
    cfg.tau_grid_step = tau_step;
    if (omega == "uniform")
        cfg.omega_mode = lora::OmegaMode::uniform;
    else if (omega == "zero")
        cfg.omega_mode = lora::OmegaMode::fixed_zero;
    else
        throw CLI::ValidationError("--omega must be uniform or zero");
    cfg.threads = resolve_threads(threads);
    return cfg;
}

int run_ser_awgn(const std::string& sf_text, const std::string& snr_text,
                 const std::string& methods_text, double trials,
                 std::uint64_t seed, const CommonOpts& common) {
    auto sfs = parse_sf_list(sf_text);
    auto snrs = parse_grid(snr_text, false);
    auto methods = split_list(methods_text);
    require_methods(methods, {"exact", "approx", "mc"});
    lora::McConfig cfg = make_mc_config(trials, seed, 0.1, "uniform", common.threads);

    std::vector<Row> rows;
    for (int sf : sfs) {
        auto params = lora::make_params(sf);
        for (double snr : snrs) {
            for (const auto& m : methods) {
                Row r{sf, snr, true, 0.0, "SER", m, 0.0, {}, {}};
                if (m == "exact") {
                    r.value = lora::ser_awgn_exact({params, snr});
                } else if (m == "approx") {
                    r.value = lora::ser_awgn_gaussian_approx({params, snr});
                } else {
                    lora::SinrQuery q{params, snr, 0.0};
                    q.interferer_present = false;
                    auto est = lora::mc_ser(q, cfg);
                    r.value = est.rate;
                    r.ci95 = est.ci95_half_width;
                    r.trials = est.trials_run;
                }
                rows.push_back(std::move(r));
            }
        }
    }
    Output out{common.out_path, common.meta_path, meta_base("ser-awgn", common)};
    out.meta["sf"] = sfs;
    out.meta["snr_db"] = snrs;
    out.meta["methods"] = methods;
    out.meta["trials"] = cfg.trials;
    out.meta["seed"] = seed;
    emit_rows(std::move(rows), out);
    return 0;
}

int run_ser_interference(const std::string& sf_text, const std::string& snr_text,
                         const std::string& sir_text, const std::string& methods_text,
                         const std::string& eps_text, double trials, std::uint64_t seed,
                         double tau_step, const std::string& omega,
                         const CommonOpts& common) {
    auto sfs = parse_sf_list(sf_text);
    auto snrs = parse_grid(snr_text, false);
    double sir = parse_grid(sir_text, true).at(0);
    bool interferer = std::isfinite(sir);
    auto methods = split_list(methods_text);
    require_methods(methods, {"exact", "approx", "mc", "chip_aligned_approx",
                              "chip_aligned_mc"});
    auto eps_list = parse_grid(eps_text, false);
    for (double e : eps_list)
        if (!(e > 0.0 && e <= 1.0))
            throw CLI::ValidationError("--epsilon values must be in (0, 1]");
    lora::McConfig cfg = make_mc_config(trials, seed, tau_step, omega, common.threads);

    std::vector<Row> rows;
    for (int sf : sfs) {
        auto params = lora::make_params(sf);
        for (double snr : snrs) {
            lora::SinrQuery q{params, snr, interferer ? sir : 0.0};
            q.interferer_present = interferer;
            for (const auto& m : methods) {
                if (m == "approx") {
                    for (double e : eps_list) {
                        lora::SinrQuery qe = q;
                        qe.epsilon = e;
                        std::string name =
                            eps_list.size() > 1 ? "approx_e" + fmt(e) : "approx";
                        rows.push_back({sf, snr, !interferer, sir, "SER", name,
                                        lora::ser_combined_approx(qe), {}, {}});
                    }
                } else if (m == "chip_aligned_approx") {
                    rows.push_back({sf, snr, !interferer, sir, "SER", m,
                                    lora::ser_combined_approx(q, true), {}, {}});
                } else if (m == "exact") {
                    rows.push_back({sf, snr, !interferer, sir, "SER", m,
                                    lora::ser_full_reduced(q), {}, {}});
                } else if (m == "mc") {
                    auto est = lora::mc_ser(q, cfg);
                    rows.push_back({sf, snr, !interferer, sir, "SER", m, est.rate,
                                    est.ci95_half_width, est.trials_run});
                } else {  // chip_aligned_mc
                    auto est = lora::mc_integer_tau_ser(q, cfg);
                    rows.push_back({sf, snr, !interferer, sir, "SER", m, est.rate,
                                    est.ci95_half_width, est.trials_run});
                }
            }
        }
    }
    Output out{common.out_path, common.meta_path,
               meta_base("ser-interference", common)};
    out.meta["sf"] = sfs;
    out.meta["snr_db"] = snrs;
    out.meta["sir_db"] = interferer ? json(sir) : json("inf");
    out.meta["methods"] = methods;
    out.meta["epsilon"] = eps_list;
    out.meta["tau_step"] = tau_step;
    out.meta["omega"] = omega;
    out.meta["trials"] = cfg.trials;
    out.meta["seed"] = seed;
    emit_rows(std::move(rows), out);
    return 0;
}

int run_fer(const std::string& sf_text, const std::string& snr_text,
            const std::string& sir_text, const std::string& methods_text,
            int frame_len, double eps, double trials, std::uint64_t seed,
            double tau_step, const std::string& omega, const CommonOpts& common) {
    auto sfs = parse_sf_list(sf_text);
    auto snrs = parse_grid(snr_text, false);
    double sir = parse_grid(sir_text, true).at(0);
    bool interferer = std::isfinite(sir);
    auto methods = split_list(methods_text);
    require_methods(methods, {"approx", "mc"});
    lora::McConfig cfg = make_mc_config(trials, seed, tau_step, omega, common.threads);

    std::vector<Row> rows;
    for (int sf : sfs) {
        auto params = lora::make_params(sf);
        for (double snr : snrs) {
            lora::SinrQuery q{params, snr, interferer ? sir : 0.0};
            q.interferer_present = interferer;
            q.epsilon = eps;
            q.frame_len = frame_len;
            for (const auto& m : methods) {
                if (m == "approx") {
                    rows.push_back({sf, snr, !interferer, sir, "FER", m,
                                    lora::fer_approx(q), {}, {}});
                } else {
                    auto est = lora::mc_fer(q, cfg);
                    rows.push_back({sf, snr, !interferer, sir, "FER", m, est.rate,
                                    est.ci95_half_width, est.trials_run});
                }
            }
        }
    }
    Output out{common.out_path, common.meta_path, meta_base("fer", common)};
    out.meta["sf"] = sfs;
    out.meta["snr_db"] = snrs;
    out.meta["sir_db"] = interferer ? json(sir) : json("inf");
    out.meta["methods"] = methods;
    out.meta["frame_len"] = frame_len;
    out.meta["epsilon"] = eps;
    out.meta["tau_step"] = tau_step;
    out.meta["omega"] = omega;
    out.meta["trials"] = cfg.trials;
    out.meta["seed"] = seed;
    emit_rows(std::move(rows), out);
    return 0;
}

int run_required_snr(const std::string& sf_text, const std::string& sir_text,
                     double target, const std::string& metric_text, int frame_len,
                     double eps, double lo_db, double hi_db,
                     const CommonOpts& common) {
    auto sfs = parse_sf_list(sf_text);
    auto sirs = parse_grid(sir_text, true);
    lora::RateMetric metric;
    if (metric_text == "ser")
        metric = lora::RateMetric::ser;
    else if (metric_text == "fer")
        metric = lora::RateMetric::fer;
    else
        throw CLI::ValidationError("--metric must be ser or fer");
    if (!(target > 0.0 && target < 1.0))
        throw CLI::ValidationError("--target must be in (0, 1)");

    struct ReqRow {
        int sf;
        double sir_db;
        std::optional<double> snr_db;
    };
    std::vector<ReqRow> rows;
    for (int sf : sfs) {
        auto params = lora::make_params(sf);
        for (double sir : sirs) {
            lora::SinrQuery q{params, 0.0, std::isfinite(sir) ? sir : 0.0};
            q.interferer_present = std::isfinite(sir);
            q.epsilon = eps;
            q.frame_len = frame_len;
            rows.push_back(
                {sf, sir, lora::required_snr(q, target, metric, {lo_db, hi_db})});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const ReqRow& a, const ReqRow& b) {
        return std::tie(a.sf, a.sir_db) < std::tie(b.sf, b.sir_db);
    });
    std::ostringstream os;
    os << "sf,sir_db,metric,target,frame_len,method,required_snr_db,status\n";
    const char* metric_name = metric == lora::RateMetric::ser ? "SER" : "FER";
    for (const auto& r : rows) {
        os << r.sf << ',' << (std::isfinite(r.sir_db) ? fmt(r.sir_db) : "inf") << ','
           << metric_name << ',' << fmt(target) << ',' << frame_len << ",approx,"
           << (r.snr_db ? fmt(*r.snr_db) : "") << ','
           << (r.snr_db ? "ok" : "unreachable") << '\n';
    }
    Output out{common.out_path, common.meta_path,
               meta_base("required-snr", common)};
    out.meta["sf"] = sfs;
    json sir_json = json::array();
    for (double s : sirs) sir_json.push_back(std::isfinite(s) ? json(s) : json("inf"));
    out.meta["sir_db"] = sir_json;
    out.meta["metric"] = metric_text;
    out.meta["target"] = target;
    out.meta["frame_len"] = frame_len;
    out.meta["epsilon"] = eps;
    out.meta["search_lo_db"] = lo_db;
    out.meta["search_hi_db"] = hi_db;
    out.write(os.str());
    return 0;
}

int run_pattern(int sf, int s1, int s2, double tau, bool check_oracle,
                const CommonOpts& common) {
    auto params = lora::make_params(sf);
    if (s1 < 0 || s1 >= params.n || s2 < 0 || s2 >= params.n)
        throw CLI::ValidationError("--s1/--s2 must be in [0, n)");
    if (!(tau >= 0.0 && tau < double(params.n)))
        throw CLI::ValidationError("--tau must be in [0, n)");
    auto pat = lora::pattern_magnitudes(params, s1, s2, tau);
    std::ostringstream os;
    os << "k,magnitude,a1,a2\n";
    double energy = 0.0;
    for (int k = 0; k < params.n; ++k) {
        auto [a1, a2] = lora::amplitude_terms(params, s1, s2, tau, k);
        double m = pat.magnitudes[std::size_t(k)];
        energy += m * m;
        os << k << ',' << fmt(m) << ',' << fmt(a1) << ',' << fmt(a2) << '\n';
    }
    os << "# energy," << fmt(energy) << '\n';
    if (check_oracle) {
        lora::Demodulator dem(params);
        auto res =
            dem.demodulate(lora::interferer_symbol_signal(params, {s1, s2, tau, 0.0}));
        double worst = 0.0;
        for (int k = 0; k < params.n; ++k)
            worst = std::max(worst, std::abs(pat.magnitudes[std::size_t(k)] -
                                             res.bin_magnitudes[std::size_t(k)]));
        os << "# max_abs_diff," << fmt(worst) << '\n';
    }
    Output out{common.out_path, common.meta_path, meta_base("pattern", common)};
    out.meta["sf"] = sf;
    out.meta["s_i1"] = s1;
    out.meta["s_i2"] = s2;
    out.meta["tau"] = tau;
    out.meta["check_oracle"] = check_oracle;
    out.write(os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chirp spread spectrum error-rate toolkit"};
    app.require_subcommand(1);

    // ser-awgn
    std::string sa_sf, sa_snr, sa_methods = "exact,approx,mc";
    double sa_trials = 100000;
    std::uint64_t sa_seed = 1;
    CommonOpts sa_common;
    auto* sa = app.add_subcommand("ser-awgn", "symbol error rate, noise only");
    sa->add_option("--sf", sa_sf, "spreading factors, e.g. 7 or 7,9,12")->required();
    sa->add_option("--snr", sa_snr, "SNR grid in dB: start:stop:step or list")->required();
    sa->add_option("--methods", sa_methods, "subset of exact,approx,mc");
    sa->add_option("--trials", sa_trials, "simulation trials per point");
    sa->add_option("--seed", sa_seed, "simulation seed");
    sa_common.attach(sa);

    // ser-interference
    std::string si_sf, si_snr, si_sir, si_methods = "approx,mc", si_eps = "0.2",
                si_omega = "uniform";
    double si_trials = 100000, si_tau_step = 0.1;
    std::uint64_t si_seed = 1;
    CommonOpts si_common;
    auto* si = app.add_subcommand("ser-interference",
                                  "symbol error rate with one same-sf interferer");
    si->add_option("--sf", si_sf, "spreading factors")->required();
    si->add_option("--snr", si_snr, "SNR grid in dB")->required();
    si->add_option("--sir", si_sir, "signal-to-interference ratio in dB, or inf")->required();
    si->add_option("--methods", si_methods,
                   "subset of exact,approx,mc,chip_aligned_approx,chip_aligned_mc");
    si->add_option("--epsilon", si_eps, "offset grid spacing(s) for approx, in (0,1]");
    si->add_option("--trials", si_trials, "simulation trials per point");
    si->add_option("--seed", si_seed, "simulation seed");
    si->add_option("--tau-step", si_tau_step,
                   "simulated offset lattice step in chips (0 = continuous)");
    si->add_option("--omega", si_omega, "interferer phase: uniform or zero");
    si_common.attach(si);

    // fer
    std::string fe_sf, fe_snr, fe_sir, fe_methods = "approx,mc", fe_omega = "uniform";
    int fe_frame = 10;
    double fe_eps = 0.2, fe_trials = 10000, fe_tau_step = 0.1;
    std::uint64_t fe_seed = 1;
    CommonOpts fe_common;
    auto* fe = app.add_subcommand("fer", "frame error rate");
    fe->add_option("--sf", fe_sf, "spreading factors")->required();
    fe->add_option("--snr", fe_snr, "SNR grid in dB")->required();
    fe->add_option("--sir", fe_sir, "SIR in dB, or inf")->required();
    fe->add_option("--frame-len", fe_frame, "symbols per frame")
        ->check(CLI::PositiveNumber);
    fe->add_option("--methods", fe_methods, "subset of approx,mc");
    fe->add_option("--epsilon", fe_eps, "offset grid spacing for approx");
    fe->add_option("--trials", fe_trials, "simulated frames per point");
    fe->add_option("--seed", fe_seed, "simulation seed");
    fe->add_option("--tau-step", fe_tau_step, "offset lattice step (0 = continuous)");
    fe->add_option("--omega", fe_omega, "interferer phase: uniform or zero");
    fe_common.attach(fe);

    // required-snr
    std::string rq_sf, rq_sir, rq_metric = "ser";
    double rq_target = 0.0, rq_eps = 0.2, rq_lo = -40.0, rq_hi = 10.0;
    int rq_frame = 1;
    CommonOpts rq_common;
    auto* rq = app.add_subcommand("required-snr",
                                  "lowest SNR meeting a target error rate");
    rq->add_option("--sf", rq_sf, "spreading factors")->required();
    rq->add_option("--sir", rq_sir, "SIR grid in dB (inf allowed in lists)")->required();
    rq->add_option("--target", rq_target, "target error rate in (0,1)")->required();
    rq->add_option("--metric", rq_metric, "ser or fer");
    rq->add_option("--frame-len", rq_frame, "symbols per frame (fer metric)")
        ->check(CLI::PositiveNumber);
    rq->add_option("--epsilon", rq_eps, "offset grid spacing for the approximation");
    rq->add_option("--search-lo", rq_lo, "search bracket lower edge, dB");
    rq->add_option("--search-hi", rq_hi, "search bracket upper edge, dB");
    rq_common.attach(rq);

    // pattern
    int pa_sf = 7, pa_s1 = 0, pa_s2 = 0;
    double pa_tau = 0.0;
    bool pa_check = false;
    CommonOpts pa_common;
    auto* pa = app.add_subcommand("pattern", "interference bin-magnitude pattern");
    pa->add_option("--sf", pa_sf, "spreading factor")->required();
    pa->add_option("--s1", pa_s1, "interferer symbol before the boundary")->required();
    pa->add_option("--s2", pa_s2, "interferer symbol after the boundary")->required();
    pa->add_option("--tau", pa_tau, "interferer offset in chips, [0, n)")->required();
    pa->add_flag("--check-oracle", pa_check,
                 "recompute via direct demodulation and append the max deviation");
    pa_common.attach(pa);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sa->parsed())
            return run_ser_awgn(sa_sf, sa_snr, sa_methods, sa_trials, sa_seed, sa_common);
        if (si->parsed())
            return run_ser_interference(si_sf, si_snr, si_sir, si_methods, si_eps,
                                        si_trials, si_seed, si_tau_step, si_omega,
                                        si_common);
        if (fe->parsed())
            return run_fer(fe_sf, fe_snr, fe_sir, fe_methods, fe_frame, fe_eps,
                           fe_trials, fe_seed, fe_tau_step, fe_omega, fe_common);
        if (rq->parsed())
            return run_required_snr(rq_sf, rq_sir, rq_target, rq_metric, rq_frame,
                                    rq_eps, rq_lo, rq_hi, rq_common);
        if (pa->parsed())
            return run_pattern(pa_sf, pa_s1, pa_s2, pa_tau, pa_check, pa_common);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
