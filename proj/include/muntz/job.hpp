#ifndef MUNTZ_JOB_HPP
#define MUNTZ_JOB_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "muntz/criteria.hpp"
#include "muntz/errors.hpp"
#include "muntz/exponents.hpp"
#include "muntz/fuchs.hpp"
#include "muntz/gram.hpp"
#include "muntz/weight.hpp"

namespace muntz {

using ordered_json = nlohmann::ordered_json;

struct SweepParams {
    double target_b = 0;
    std::vector<std::size_t> n_values;
};

struct JobSpec {
    ordered_json echo; // input with defaults filled, for reproducibility
    WeightModel weight = WeightModel::gamma_exp(0.0, 1.0, 1.0);
    ExponentSequence seq = ExponentSequence::arithmetic(1.0, 1.0);
    std::vector<std::string> tasks;
    std::optional<SweepParams> sweep;
    GridSpec grid{2.0, 0, 40};
    PrecisionMode precision = PrecisionMode::Compensated;
    std::string output_dir = "out";
};

struct ValidationResult {
    std::optional<JobSpec> spec;
    std::vector<std::string> errors; // "<json-pointer>: <message>"

    bool ok() const { return errors.empty(); }
};

namespace detail {

inline bool want_number(const ordered_json& obj, const std::string& ptr_base,
                        const std::string& key, std::vector<std::string>& errs, double& out) {
    if (!obj.contains(key)) {
        errs.push_back(ptr_base + "/" + key + ": missing");
        return false;
    }
    if (!obj[key].is_number()) {
        errs.push_back(ptr_base + "/" + key + ": must be a number");
        return false;
    }
    out = obj[key].get<double>();
    return true;
}

inline std::function<double(double)> table_interpolant(std::vector<double> ts,
                                                       std::vector<double> ws, double rate,
                                                       double power) {
    return [ts = std::move(ts), ws = std::move(ws), rate, power](double t) {
        if (t <= 0) return 0.0;
        const double lt = std::log(t);
        std::vector<double> lx(ts.size()), ly(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            lx[i] = std::log(ts[i]);
            ly[i] = std::log(ws[i]);
        }
        if (t >= ts.back())
            return ws.back() * std::exp(-rate * (std::pow(t, power) - std::pow(ts.back(), power)));
        std::size_t i = 0;
        while (i + 2 < ts.size() && lx[i + 1] < lt) ++i;
        const double u = (lt - lx[i]) / (lx[i + 1] - lx[i]);
        return std::exp(ly[i] + u * (ly[i + 1] - ly[i]));
    };
}

} // namespace detail

inline ValidationResult validate_spec(const std::string& raw) {
    ValidationResult res;
    ordered_json j = ordered_json::parse(raw, nullptr, false);
    if (j.is_discarded()) {
        res.errors.push_back(": not valid JSON");
        return res;
    }
    if (!j.is_object()) {
        res.errors.push_back(": top level must be an object");
        return res;
    }
    auto& errs = res.errors;
    JobSpec spec;
    ordered_json echo;

    // weight
    if (!j.contains("weight") || !j["weight"].is_object()) {
        errs.push_back("/weight: missing or not an object");
    } else {
        const ordered_json& w = j["weight"];
        const std::string type = w.value("type", "");
        ordered_json we;
        we["type"] = type;
        if (type == "gamma_exp") {
            double beta = 0, D = 0, alpha = 0;
            bool ok = detail::want_number(w, "/weight", "beta", errs, beta);
            ok &= detail::want_number(w, "/weight", "D", errs, D);
            ok &= detail::want_number(w, "/weight", "alpha", errs, alpha);
            if (ok) {
                if (!(beta > -0.5)) errs.push_back("/weight/beta: beta must exceed -1/2");
                if (!(D > 0)) errs.push_back("/weight/D: must be positive");
                if (!(alpha > 0)) errs.push_back("/weight/alpha: must be positive");
            }
            if (errs.empty()) spec.weight = WeightModel::gamma_exp(beta, D, alpha);
            we["beta"] = beta;
            we["D"] = D;
            we["alpha"] = alpha;
        } else if (type == "product_osc") {
            double beta = 0;
            bool ok = detail::want_number(w, "/weight", "beta", errs, beta);
            if (ok && !(beta > -0.5)) errs.push_back("/weight/beta: beta must exceed -1/2");
            std::string osc_name = w.value("osc", "one");
            OscSpec osc = OscSpec::one();
            if (osc_name == "four_plus_sin")
                osc = OscSpec::four_plus_sin();
            else if (osc_name != "one")
                errs.push_back("/weight/osc: unknown oscillation; allowed: one, four_plus_sin");
            std::vector<OscTerm> terms;
            if (!w.contains("terms") || !w["terms"].is_array() || w["terms"].empty()) {
                errs.push_back("/weight/terms: missing or empty array");
            } else {
                for (std::size_t i = 0; i < w["terms"].size(); ++i) {
                    const std::string base = "/weight/terms/" + std::to_string(i);
                    double D = 0, alpha = 0;
                    if (w["terms"][i].is_object()) {
                        detail::want_number(w["terms"][i], base, "D", errs, D);
                        detail::want_number(w["terms"][i], base, "alpha", errs, alpha);
                    } else {
                        errs.push_back(base + ": must be an object");
                    }
                    terms.push_back({D, alpha});
                }
            }
            if (errs.empty()) {
                try {
                    spec.weight = WeightModel::product_osc(beta, osc, terms);
                } catch (const Error& e) {
                    errs.push_back(std::string("/weight: ") + e.what());
                }
            }
            we["beta"] = beta;
            we["osc"] = osc_name;
            we["terms"] = w.contains("terms") ? w["terms"] : ordered_json::array();
        } else if (type == "table") {
            std::vector<double> ts, ws;
            if (!w.contains("points") || !w["points"].is_array() || w["points"].size() < 2) {
                errs.push_back("/weight/points: need an array of at least two [t, w] pairs");
            } else {
                for (std::size_t i = 0; i < w["points"].size(); ++i) {
                    const auto& p = w["points"][i];
                    const std::string base = "/weight/points/" + std::to_string(i);
                    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                        errs.push_back(base + ": must be [t, w] with numbers");
                        continue;
                    }
                    const double t = p[0].get<double>(), wv = p[1].get<double>();
                    if (!(t > 0) || !(wv > 0)) errs.push_back(base + ": t and w must be positive");
                    if (!ts.empty() && t <= ts.back())
                        errs.push_back(base + ": t values must be strictly increasing");
                    ts.push_back(t);
                    ws.push_back(wv);
                }
            }
            double rate = 0, power = 0;
            if (!w.contains("decay") || !w["decay"].is_object()) {
                errs.push_back("/weight/decay: missing {rate, power}");
            } else {
                detail::want_number(w["decay"], "/weight/decay", "rate", errs, rate);
                detail::want_number(w["decay"], "/weight/decay", "power", errs, power);
                if (!(rate > 0) || !(power > 0))
                    errs.push_back("/weight/decay: rate and power must be positive");
            }
            if (errs.empty())
                spec.weight = WeightModel::custom(detail::table_interpolant(ts, ws, rate, power),
                                                 DecayHint::exponential(rate, power));
            we["points"] = w.contains("points") ? w["points"] : ordered_json::array();
            we["decay"] = w.contains("decay") ? w["decay"] : ordered_json::object();
        } else {
            errs.push_back("/weight/type: unknown type; allowed: gamma_exp, product_osc, table");
        }
        echo["weight"] = we;
    }

    // sequence
    if (!j.contains("sequence") || !j["sequence"].is_object()) {
        errs.push_back("/sequence: missing or not an object");
    } else {
        const ordered_json& s = j["sequence"];
        const std::string type = s.value("type", "");
        ordered_json se;
        se["type"] = type;
        try {
            if (type == "arithmetic") {
                double a1 = 0, d = 0;
                bool ok = detail::want_number(s, "/sequence", "a1", errs, a1);
                ok &= detail::want_number(s, "/sequence", "d", errs, d);
                if (ok) spec.seq = ExponentSequence::arithmetic(a1, d);
                se["a1"] = a1;
                se["d"] = d;
            } else if (type == "power") {
                double c = 0, p = 0;
                bool ok = detail::want_number(s, "/sequence", "c", errs, c);
                ok &= detail::want_number(s, "/sequence", "p", errs, p);
                if (ok) spec.seq = ExponentSequence::power(c, p);
                se["c"] = c;
                se["p"] = p;
            } else if (type == "geometric") {
                double a1 = 0, q = 0;
                bool ok = detail::want_number(s, "/sequence", "a1", errs, a1);
                ok &= detail::want_number(s, "/sequence", "q", errs, q);
                if (ok) spec.seq = ExponentSequence::geometric(a1, q);
                se["a1"] = a1;
                se["q"] = q;
            } else if (type == "explicit") {
                std::vector<double> vals;
                if (!s.contains("values") || !s["values"].is_array() || s["values"].empty()) {
                    errs.push_back("/sequence/values: need a nonempty array of numbers");
                } else {
                    for (const auto& v : s["values"]) {
                        if (!v.is_number()) {
                            errs.push_back("/sequence/values: entries must be numbers");
                            break;
                        }
                        vals.push_back(v.get<double>());
                    }
                }
                if (errs.empty()) spec.seq = ExponentSequence::explicit_list(vals);
                se["values"] = s.contains("values") ? s["values"] : ordered_json::array();
            } else {
                errs.push_back(
                    "/sequence/type: unknown type; allowed: arithmetic, power, geometric, explicit");
            }
        } catch (const Error& e) {
            errs.push_back(std::string("/sequence: ") + e.what());
        }
        echo["sequence"] = se;
    }

    // tasks
    const std::set<std::string> known = {"decide", "sweep", "eval_tables", "probe", "fuchs_check"};
    if (!j.contains("tasks") || !j["tasks"].is_array() || j["tasks"].empty()) {
        errs.push_back("/tasks: need a nonempty array");
    } else {
        for (std::size_t i = 0; i < j["tasks"].size(); ++i) {
            const auto& t = j["tasks"][i];
            if (!t.is_string() || !known.count(t.get<std::string>())) {
                errs.push_back("/tasks/" + std::to_string(i) +
                               ": allowed: decide, sweep, eval_tables, probe, fuchs_check");
                continue;
            }
            spec.tasks.push_back(t.get<std::string>());
        }
        echo["tasks"] = j["tasks"];
    }

    // sweep params, required when the sweep task is requested
    const bool wants_sweep =
        std::find(spec.tasks.begin(), spec.tasks.end(), "sweep") != spec.tasks.end();
    if (j.contains("sweep_params")) {
        const ordered_json& sp = j["sweep_params"];
        SweepParams params;
        detail::want_number(sp, "/sweep_params", "target_b", errs, params.target_b);
        if (!sp.contains("n_values") || !sp["n_values"].is_array() || sp["n_values"].empty()) {
            errs.push_back("/sweep_params/n_values: need a nonempty array of positive integers");
        } else {
            for (const auto& v : sp["n_values"]) {
                if (!v.is_number_integer() || v.get<long>() < 1) {
                    errs.push_back("/sweep_params/n_values: entries must be positive integers");
                    break;
                }
                params.n_values.push_back(std::size_t(v.get<long>()));
            }
        }
        spec.sweep = params;
        echo["sweep_params"] = sp;
    } else if (wants_sweep) {
        errs.push_back("/sweep_params: required by the sweep task");
    }

    // grids (optional override)
    if (j.contains("grids")) {
        const ordered_json& g = j["grids"];
        if (!g.is_object()) {
            errs.push_back("/grids: must be an object");
        } else {
            if (g.contains("j_min")) spec.grid.j_min = g["j_min"].get<int>();
            if (g.contains("j_max")) spec.grid.j_max = g["j_max"].get<int>();
            if (spec.grid.j_min < 0 || spec.grid.j_max > 64 ||
                spec.grid.j_min >= spec.grid.j_max)
                errs.push_back("/grids: need 0 <= j_min < j_max <= 64");
        }
    }
    echo["grids"] = {{"base", spec.grid.base}, {"j_min", spec.grid.j_min},
                     {"j_max", spec.grid.j_max}};

    if (j.contains("precision")) {
        const std::string p = j["precision"].get<std::string>();
        if (p == "double")
            spec.precision = PrecisionMode::Double;
        else if (p == "compensated")
            spec.precision = PrecisionMode::Compensated;
        else
            errs.push_back("/precision: allowed: double, compensated");
    }
    echo["precision"] = spec.precision == PrecisionMode::Double ? "double" : "compensated";

    if (j.contains("output_dir")) spec.output_dir = j["output_dir"].get<std::string>();
    echo["output_dir"] = spec.output_dir;

    if (!errs.empty()) return res;
    spec.echo = std::move(echo);
    res.spec = std::move(spec);
    return res;
}

namespace detail {

inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << content;
        if (!out) throw EvaluationError("run_job: cannot write " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

inline ordered_json report_to_json(const CriterionReport& rep) {
    auto tail_json = [](const DivergenceReport& r) {
        ordered_json t;
        switch (r.classification) {
            case TailClass::Divergent: t["classification"] = "Divergent"; break;
            case TailClass::Convergent: t["classification"] = "Convergent"; break;
            case TailClass::Borderline: t["classification"] = "Borderline"; break;
        }
        t["exponent_estimate"] = r.exponent_estimate;
        t["method"] = r.method == TailMethod::ExactAsymptotic ? "exact" : "numeric_fit";
        return t;
    };
    ordered_json out;
    out["verdict"] = to_string(rep.verdict);
    ordered_json nec;
    nec["fired"] = rep.necessity.fired;
    nec["admissible"] = rep.necessity.admissible;
    nec["normal"] = rep.necessity.normal;
    nec["tail"] = tail_json(rep.necessity.report);
    nec["C_cal"] = rep.necessity.C_cal;
    out["necessity"] = nec;
    ordered_json suf;
    suf["fired"] = rep.sufficiency.fired;
    suf["alpha"] = rep.sufficiency.alpha_used;
    suf["log_B_inf"] = rep.sufficiency.log_B_inf;
    suf["doubling_lo"] = rep.sufficiency.doubling.first;
    suf["doubling_hi"] = rep.sufficiency.doubling.second;
    if (rep.sufficiency.gap_d) suf["gap"] = *rep.sufficiency.gap_d;
    if (!rep.sufficiency.reason.empty()) suf["reason"] = rep.sufficiency.reason;
    suf["tail"] = tail_json(rep.sufficiency.report);
    out["sufficiency"] = suf;
    if (rep.closed_form && rep.closed_form->applicable) {
        ordered_json cf;
        cf["verdict"] = to_string(rep.closed_form->verdict);
        cf["tail"] = tail_json(rep.closed_form->report);
        out["closed_form"] = cf;
    }
    out["notes"] = rep.notes;
    return out;
}

// fuchs grid: x offset half a gap off each exponent keeps clear of the
// exclusion balls
inline std::vector<std::complex<double>> fuchs_grid(const ExponentSequence& seq, int refine) {
    std::vector<std::complex<double>> pts;
    const double d = seq.gap_check(64).value_or(1.0);
    int k_max = 6 * refine;
    if (seq.finite()) k_max = std::min(k_max, int(seq.size()));
    for (int k = 1; k <= k_max; ++k) {
        const double x = seq.a(std::size_t(k)) + 0.5 * d;
        for (double yr : {0.0, 0.5, 2.0}) pts.emplace_back(x, yr * x);
    }
    for (double y : {0.1, 1.0, 10.0, 100.0}) pts.emplace_back(0.0, y);
    return pts;
}

} // namespace detail

// Runs the requested tasks and writes verdict.json plus any CSVs to the
// output directory.  Exit codes: 0 honest result (including Indeterminate),
// 2 input errors, 3 internal precision failures.
inline int run_job(const JobSpec& spec) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(spec.output_dir);
    std::vector<fs::path> written;
    auto cleanup = [&]() {
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    };

    ordered_json doc;
    doc["schema_version"] = "1.0";
    doc["job"] = spec.echo;
    int code = 0;
    try {
        auto has = [&](const char* t) {
            return std::find(spec.tasks.begin(), spec.tasks.end(), t) != spec.tasks.end();
        };
        if (has("decide")) {
            const CriterionReport rep = decide(spec.weight, spec.seq, spec.grid);
            doc["report"] = detail::report_to_json(rep);
            if (rep.verdict == Verdict::Inconsistent) code = 3;
        }
        if (has("sweep")) {
            const SweepParams& sp = *spec.sweep;
            const std::size_t n_max =
                *std::max_element(sp.n_values.begin(), sp.n_values.end());
            const auto rows =
                error_sweep(spec.weight, spec.seq, sp.target_b, n_max, spec.precision);
            std::string csv = "n,dist,cond_estimate\n";
            ordered_json jrows = ordered_json::array();
            for (const auto& r : rows) {
                if (std::find(sp.n_values.begin(), sp.n_values.end(), r.n) ==
                    sp.n_values.end())
                    continue;
                csv += std::to_string(r.n) + "," + detail::fmt_num(r.dist) + "," +
                       detail::fmt_num(r.cond_estimate) + "\n";
                jrows.push_back({{"n", r.n}, {"dist", r.dist}});
            }
            detail::atomic_write(fs::path(spec.output_dir) / "sweep.csv", csv);
            written.push_back(fs::path(spec.output_dir) / "sweep.csv");
            doc["sweep"] = {{"target_b", sp.target_b}, {"rows", jrows}};
        }
        if (has("eval_tables")) {
            std::string csv = "r,m,log_psi,f_sharp,f_thm4\n";
            const bool closed = spec.weight.kind() == WeightModel::Kind::GammaExp;
            std::optional<detail::MomentCache> cache;
            if (!closed) cache.emplace(spec.weight);
            for (int jj = spec.grid.j_min; jj <= spec.grid.j_max; ++jj) {
                const double r = spec.grid.r(jj);
                const EnvelopeSample s =
                    closed ? envelope_f(spec.weight, spec.seq, r)
                           : detail::envelope_from_cache(spec.weight, spec.seq, r, *cache);
                const double m = spec.seq.m_of_r(r);
                csv += detail::fmt_num(r) + "," + detail::fmt_num(m) + "," +
                       detail::fmt_num(2.0 * m) + "," + detail::fmt_num(s.f_sharp) + "," +
                       detail::fmt_num(s.f_thm4) + "\n";
            }
            detail::atomic_write(fs::path(spec.output_dir) / "tables.csv", csv);
            written.push_back(fs::path(spec.output_dir) / "tables.csv");
        }
        if (has("probe")) {
            const NormalityReport rep = normality_probe(spec.weight, 10);
            ordered_json pj;
            switch (rep.verdict) {
                case NormalityVerdict::NormalPolyRate: pj["verdict"] = "normal_poly_rate"; break;
                case NormalityVerdict::NormalExpRate: pj["verdict"] = "normal_exp_rate"; break;
                case NormalityVerdict::Fail: pj["verdict"] = "fail"; break;
            }
            pj["attained_n"] = rep.attained_n;
            pj["fitted_c"] = rep.fitted_c;
            ordered_json zeros = ordered_json::array();
            for (const auto& [n, x] : rep.zeros) zeros.push_back({{"n", n}, {"x1n", x}});
            pj["zeros"] = zeros;
            doc["probe"] = pj;
        }
        if (has("fuchs_check")) {
            const FuchsProduct fp(spec.seq);
            const auto grid = detail::fuchs_grid(spec.seq, 1);
            const UpperBoundReport up = check_upper_bound(fp, grid);
            std::optional<LowerBoundReport> lo;
            if (fp.exclusion_radius) lo = check_lower_bound(fp, grid);
            std::string csv = "re_z,im_z,log_abs_H,bound_rhs\n";
            for (const auto& z : grid) {
                const HValue h = eval_H(fp, z);
                const double rhs =
                    z.real() * (std::log(up.C_fit) + 2.0 * fp.seq.m_of_r(std::abs(z)));
                csv += detail::fmt_num(z.real()) + "," + detail::fmt_num(z.imag()) + "," +
                       detail::fmt_num(h.modulus.is_zero()
                                           ? -std::numeric_limits<double>::infinity()
                                           : h.modulus.log_mag) +
                       "," + detail::fmt_num(rhs) + "\n";
            }
            detail::atomic_write(fs::path(spec.output_dir) / "fuchs.csv", csv);
            written.push_back(fs::path(spec.output_dir) / "fuchs.csv");
            ordered_json fj;
            fj["C_fit"] = up.C_fit;
            fj["max_violation"] = up.max_violation;
            if (lo) {
                fj["C2_fit"] = lo->C2_fit;
                fj["min_margin"] = lo->min_margin;
            }
            doc["fuchs"] = fj;
        }
    } catch (const DomainError& e) {
        cleanup();
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const MomentDivergesError& e) {
        cleanup();
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        cleanup();
        std::fprintf(stderr, "precision failure: %s\n", e.what());
        return 3;
    }

    doc["environment"] = {{"precision",
                           spec.precision == PrecisionMode::Double ? "double" : "compensated"},
                          {"grid", spec.echo["grids"]}};
    const auto t1 = std::chrono::steady_clock::now();
    doc["timing"] = {{"seconds",
                      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() /
                          1000.0}};
    detail::atomic_write(std::filesystem::path(spec.output_dir) / "verdict.json",
                         doc.dump(2) + "\n");
    return code;
}

} // namespace muntz

#endif
