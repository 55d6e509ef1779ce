// ringlab: Single Ring model laboratory. Samples A = UTV, measures linear
// spectral statistics, compares against limit-theory covariances and exact
// Haar-moment oracles, and studies spectral outliers of multiplicative
// perturbations.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <iostream>

#include "ringlab/covariance.hpp"
#include "ringlab/montecarlo.hpp"
#include "ringlab/outliers.hpp"
#include "ringlab/weingarten.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ringlab;

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

struct Config {
    std::string kind;
    SingularProfile profile = SingularProfile::identity();
    Composition composition = Composition::UTV;
    std::vector<Observable> observables;
    std::vector<LaurentPoly> observable_fs;
    std::size_t n = 256;
    std::size_t trials = 2000;
    std::uint64_t seed = 0;
    int threads = 0;
    int truncation = 8;
    int k = 2;  // weingarten moment order / elliptic corner size
    std::string out;
    cd z{2.0, 0.0}, zp{2.0, 0.0};
    bool has_zp = false;
    PerturbationSpec perturbation;
    bool has_perturbation = false;
    std::vector<std::size_t> dims{250, 500, 1000, 2000};
};

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

cd parse_complex(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        config_error(path, "expected a [re, im] pair");
    return cd(j[0].get<double>(), j[1].get<double>());
}

LaurentPoly parse_laurent(const json& j, const std::string& path) {
    if (!j.is_array()) config_error(path, "expected a list of [power, re, im] triples");
    LaurentPoly f;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& term = j[i];
        const std::string tpath = path + "[" + std::to_string(i) + "]";
        if (!term.is_array() || term.size() != 3 || !term[0].is_number_integer())
            config_error(tpath, "expected a [power, re, im] triple");
        const int n = term[0].get<int>();
        f.set(n, f.coeff(n) + cd(term[1].get<double>(), term[2].get<double>()));
    }
    return f;
}

SingularProfile parse_profile(const json& j, const std::string& path) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "identity") return SingularProfile::identity();
        config_error(path, "unknown profile name '" + s + "'");
    }
    if (!j.is_object()) config_error(path, "expected 'identity' or a profile object");
    const std::string kind = j.value("kind", "");
    if (kind == "uniform") {
        for (const auto& [key, val] : j.items())
            if (key != "kind" && key != "lo" && key != "hi")
                config_error(path + "." + key, "unknown key");
        if (!j.contains("lo") || !j.contains("hi"))
            config_error(path, "uniform profile needs 'lo' and 'hi'");
        const double lo = j["lo"].get<double>(), hi = j["hi"].get<double>();
        if (!(lo >= 0.0 && lo < hi))
            config_error(path + ".lo", "uniform profile requires 0 <= lo < hi");
        return SingularProfile::uniform(lo, hi);
    }
    if (kind == "atoms") {
        for (const auto& [key, val] : j.items())
            if (key != "kind" && key != "atoms") config_error(path + "." + key, "unknown key");
        if (!j.contains("atoms") || !j["atoms"].is_array())
            config_error(path + ".atoms", "expected a list of [value, weight] pairs");
        std::vector<std::pair<double, double>> atoms;
        for (const auto& a : j["atoms"]) {
            if (!a.is_array() || a.size() != 2)
                config_error(path + ".atoms", "expected [value, weight] pairs");
            atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
        }
        return SingularProfile::discrete(std::move(atoms));
    }
    config_error(path + ".kind", "expected 'uniform' or 'atoms'");
}

void parse_config_json(const json& j, Config& cfg) {
    static const std::vector<std::string> known{
        "kind",   "profile",   "composition", "f",    "observables", "n",
        "trials", "seed",      "threads",     "out",  "truncation",  "k",
        "z",      "zp",        "perturbation", "dims"};
    for (const auto& [key, val] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            config_error(key, "unknown key");

    if (j.contains("kind")) cfg.kind = j["kind"].get<std::string>();
    if (j.contains("profile")) cfg.profile = parse_profile(j["profile"], "profile");
    if (j.contains("composition")) {
        const std::string c = j["composition"].get<std::string>();
        if (c == "utv")
            cfg.composition = Composition::UTV;
        else if (c == "ut")
            cfg.composition = Composition::UT;
        else
            config_error("composition", "expected 'utv' or 'ut'");
    }
    if (j.contains("f")) {
        cfg.observable_fs = {parse_laurent(j["f"], "f")};
    }
    if (j.contains("observables")) {
        if (!j["observables"].is_array()) config_error("observables", "expected a list");
        cfg.observable_fs.clear();
        for (std::size_t i = 0; i < j["observables"].size(); ++i) {
            const json& o = j["observables"][i];
            const std::string path = "observables[" + std::to_string(i) + "]";
            if (o.is_array())
                cfg.observable_fs.push_back(parse_laurent(o, path));
            else if (o.is_object() && o.contains("f"))
                cfg.observable_fs.push_back(parse_laurent(o["f"], path + ".f"));
            else
                config_error(path, "expected a Laurent coefficient list or {\"f\": ...}");
        }
    }
    if (j.contains("n")) cfg.n = j["n"].get<std::size_t>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<std::size_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("truncation")) cfg.truncation = j["truncation"].get<int>();
    if (j.contains("k")) cfg.k = j["k"].get<int>();
    if (j.contains("z")) cfg.z = parse_complex(j["z"], "z");
    if (j.contains("zp")) {
        cfg.zp = parse_complex(j["zp"], "zp");
        cfg.has_zp = true;
    }
    if (j.contains("perturbation")) {
        const json& p = j["perturbation"];
        for (const auto& [key, val] : p.items())
            if (key != "eigenvalues" && key != "variant")
                config_error("perturbation." + key, "unknown key");
        if (!p.contains("eigenvalues") || !p["eigenvalues"].is_array())
            config_error("perturbation.eigenvalues", "expected a list of [re, im] pairs");
        cfg.perturbation.p_eigenvalues.clear();
        for (std::size_t i = 0; i < p["eigenvalues"].size(); ++i)
            cfg.perturbation.p_eigenvalues.push_back(parse_complex(
                p["eigenvalues"][i], "perturbation.eigenvalues[" + std::to_string(i) + "]"));
        const std::string v = p.value("variant", "ap");
        if (v == "ap")
            cfg.perturbation.variant = PerturbationVariant::APlusAP;
        else if (v == "p")
            cfg.perturbation.variant = PerturbationVariant::APlusP;
        else
            config_error("perturbation.variant", "expected 'ap' or 'p'");
        cfg.has_perturbation = true;
    }
    if (j.contains("dims")) {
        cfg.dims.clear();
        for (const auto& d : j["dims"]) cfg.dims.push_back(d.get<std::size_t>());
    }
}

void finalize_config(Config& cfg) {
    cfg.profile.validate();
    for (const LaurentPoly& f : cfg.observable_fs) {
        if (f.has_negative_powers() && !cfg.profile.supports_negative_powers())
            config_error("f", "negative Laurent powers require a singular-value law "
                              "bounded away from 0 (nonzero inner radius)");
        cfg.observables.push_back(Observable::linear_statistic(f));
    }
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << content;
}

std::string trials_csv(const EnsembleStats& stats) {
    std::string csv = "trial";
    const std::size_t k = stats.samples.empty() ? 0 : stats.samples[0].size();
    for (std::size_t i = 0; i < k; ++i)
        csv += ",re_obs" + std::to_string(i) + ",im_obs" + std::to_string(i);
    csv += "\r\n";
    for (std::size_t t = 0; t < stats.trials; ++t) {
        csv += std::to_string(t);
        for (std::size_t i = 0; i < k; ++i)
            csv += "," + fmt17(stats.samples[t][i].real()) + "," +
                   fmt17(stats.samples[t][i].imag());
        csv += "\r\n";
    }
    return csv;
}

json stats_json(const EnsembleStats& stats) {
    json out;
    out["trials"] = stats.trials;
    out["n"] = stats.dim;
    json pairs = json::array();
    const std::size_t k = stats.pairs.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            json p;
            p["i"] = i;
            p["j"] = j;
            p["pseudo"] = complex_json(stats.pairs[i][j].pseudo);
            p["pseudo_se"] = stats.pairs[i][j].pseudo_se;
            p["hermitian"] = complex_json(stats.pairs[i][j].hermitian);
            p["hermitian_se"] = stats.pairs[i][j].hermitian_se;
            pairs.push_back(std::move(p));
        }
    out["pairs"] = std::move(pairs);
    return out;
}

json gaussianity_json(const GaussianityReport& report) {
    json out;
    out["flagged"] = report.flagged();
    json checks = json::array();
    for (const auto& c : report.checks) {
        json cj;
        cj["name"] = c.name;
        cj["z"] = c.z;
        cj["flagged"] = c.flagged;
        checks.push_back(std::move(cj));
    }
    out["checks"] = std::move(checks);
    return out;
}

fs::path ensure_out_dir(const Config& cfg) {
    const fs::path dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
    fs::create_directories(dir);
    return dir;
}

int cmd_spectrum(const Config& cfg) {
    const auto model = SingleRingModel::make(cfg.profile, cfg.composition);
    SeededStream stream(cfg.seed, 0);
    ComplexMatrix a = sample_A(model, cfg.n, stream);
    if (cfg.has_perturbation) a = build_perturbed(a, cfg.perturbation);
    const std::vector<cd> eig = eigenvalues(a);

    std::string csv = "re,im\r\n";
    for (const cd& z : eig) csv += fmt17(z.real()) + "," + fmt17(z.imag()) + "\r\n";
    const fs::path dir = ensure_out_dir(cfg);
    write_file(dir / "spectrum.csv", csv);

    json out;
    out["kind"] = "spectrum";
    out["n"] = cfg.n;
    out["seed"] = cfg.seed;
    out["inner_radius"] = model.inner_radius;
    out["outer_radius"] = model.outer_radius;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const cd& z : eig) {
        lo = std::min(lo, std::abs(z));
        hi = std::max(hi, std::abs(z));
    }
    out["min_modulus"] = lo;
    out["max_modulus"] = hi;
    write_file(dir / "stats.json", out.dump(2) + "\n");
    std::cout << "wrote " << (dir / "spectrum.csv").string() << " (" << eig.size()
              << " eigenvalues)\n";
    return 0;
}

int cmd_covariance(const Config& cfg) {
    if (cfg.observables.empty())
        config_error("f", "covariance needs at least one observable");
    const auto model = SingleRingModel::make(cfg.profile, cfg.composition);
    ExperimentPlan plan;
    plan.model = model;
    plan.observables = cfg.observables;
    plan.n = cfg.n;
    plan.trials = cfg.trials;
    plan.seed = cfg.seed;
    plan.threads = cfg.threads;
    const EnsembleStats stats = run(plan);

    json out = stats_json(stats);
    out["kind"] = "covariance";
    out["seed"] = cfg.seed;
    json theory = json::array();
    const double a = model.inner_radius, b = model.outer_radius;
    for (std::size_t i = 0; i < cfg.observable_fs.size(); ++i)
        for (std::size_t j = 0; j < cfg.observable_fs.size(); ++j) {
            const CovarianceReport r =
                theorem_covariance(cfg.observable_fs[i], cfg.observable_fs[j],
                                   PairParams::identity_weight(), a, b);
            json tj;
            tj["i"] = i;
            tj["j"] = j;
            tj["pseudo"] = complex_json(r.pseudo);
            tj["hermitian"] = complex_json(r.hermitian);
            theory.push_back(std::move(tj));
        }
    out["theory"] = std::move(theory);

    bool flagged = false;
    if (stats.trials >= 500) {
        const GaussianityReport report = gaussianity_report(stats);
        out["gaussianity"] = gaussianity_json(report);
        flagged = report.flagged();
    }

    const fs::path dir = ensure_out_dir(cfg);
    write_file(dir / "stats.json", out.dump(2) + "\n");
    write_file(dir / "trials.csv", trials_csv(stats));
    std::cout << "wrote " << (dir / "stats.json").string() << "\n";
    return flagged ? 2 : 0;
}

int cmd_charpoly(const Config& cfg) {
    const auto model = SingleRingModel::make(cfg.profile, cfg.composition);
    const cd z = cfg.z, zp = cfg.has_zp ? cfg.zp : cfg.z;
    auto region = [&](cd w) {
        return std::abs(w) < model.inner_radius ? Region::InsideHole : Region::Outside;
    };

    std::vector<cd> samples_z(cfg.trials), samples_zp(cfg.trials);
    parallel_for_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
        SeededStream stream(cfg.seed, t);
        const ComplexMatrix a = sample_A(model, cfg.n, stream);
        samples_z[t] = logdet_statistic(a, z, model);
        samples_zp[t] = (zp == z) ? samples_z[t] : cd(logdet_statistic(a, zp, model));
    });

    const double tn = static_cast<double>(cfg.trials);
    cd mean_z = 0.0, mean_zp = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        mean_z += samples_z[t];
        mean_zp += samples_zp[t];
    }
    mean_z /= tn;
    mean_zp /= tn;
    cd sum = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t)
        sum += (samples_z[t] - mean_z) * (samples_zp[t] - mean_zp);
    const cd cov = sum / tn;
    double ss = 0.0;
    for (std::size_t t = 0; t < cfg.trials; ++t)
        ss += std::norm((samples_z[t] - mean_z) * (samples_zp[t] - mean_zp) - cov);
    const double se = std::sqrt(ss / (tn * (tn - 1.0)));

    json out;
    out["kind"] = "charpoly";
    out["n"] = cfg.n;
    out["trials"] = cfg.trials;
    out["seed"] = cfg.seed;
    out["z"] = complex_json(z);
    out["zp"] = complex_json(zp);
    out["covariance"] = complex_json(cov);
    out["covariance_se"] = se;
    out["theory"] =
        logdet_kernel(z, zp, region(z), region(zp), model.inner_radius, model.outer_radius);
    const fs::path dir = ensure_out_dir(cfg);
    write_file(dir / "stats.json", out.dump(2) + "\n");

    std::string csv = "trial,re_logdet_z,im_logdet_z,re_logdet_zp,im_logdet_zp\r\n";
    for (std::size_t t = 0; t < cfg.trials; ++t)
        csv += std::to_string(t) + "," + fmt17(samples_z[t].real()) + "," +
               fmt17(samples_z[t].imag()) + "," + fmt17(samples_zp[t].real()) + "," +
               fmt17(samples_zp[t].imag()) + "\r\n";
    write_file(dir / "trials.csv", csv);
    std::cout << "wrote " << (dir / "stats.json").string() << "\n";
    return 0;
}

std::string class_name(const std::vector<int>& type) {
    bool nontrivial = false;
    for (int len : type) nontrivial |= len > 1;
    if (!nontrivial) return "id";
    std::string name;
    int next = 0;
    for (int len : type) {
        if (len > 1) {
            name += "(";
            for (int i = 0; i < len; ++i) name += std::to_string(next + i);
            name += ")";
        }
        next += len;
    }
    return name;
}

int cmd_weingarten(const Config& cfg) {
    const WgTable table = wg_table(cfg.k, static_cast<long long>(cfg.n));
    std::string line;
    for (const auto& [type, value] : table.values) {
        if (!line.empty()) line += ", ";
        line += class_name(type) + ": " + value.str();
    }
    std::cout << line << "\n";
    if (!cfg.out.empty()) {
        json out;
        out["kind"] = "weingarten";
        out["k"] = cfg.k;
        out["n"] = cfg.n;
        json values;
        for (const auto& [type, value] : table.values) values[class_name(type)] = value.str();
        out["values"] = std::move(values);
        write_file(ensure_out_dir(cfg) / "stats.json", out.dump(2) + "\n");
    }
    return 0;
}

int cmd_outliers(const Config& cfg) {
    if (!cfg.has_perturbation)
        config_error("perturbation", "outliers needs a perturbation spec");
    const auto model = SingleRingModel::make(cfg.profile, cfg.composition);
    const OutlierPrediction pred = predict(cfg.perturbation, model);

    SeededStream stream(cfg.seed, 0);
    const ComplexMatrix a = sample_A(model, cfg.n, stream);
    const ComplexMatrix perturbed = build_perturbed(a, cfg.perturbation);
    const std::vector<cd> eig = eigenvalues(perturbed);
    const std::vector<cd> detections = filter_outliers(eig, model);

    const fs::path dir = ensure_out_dir(cfg);
    std::string spec_csv = "re,im\r\n";
    for (const cd& z : eig) spec_csv += fmt17(z.real()) + "," + fmt17(z.imag()) + "\r\n";
    write_file(dir / "spectrum.csv", spec_csv);

    std::string pred_csv = "re_predicted,im_predicted,multiplicity\r\n";
    for (const auto& item : pred.items)
        pred_csv += fmt17(item.location.real()) + "," + fmt17(item.location.imag()) + "," +
                    std::to_string(item.multiplicity) + "\r\n";
    write_file(dir / "predictions.csv", pred_csv);

    json out;
    out["kind"] = "outliers";
    out["n"] = cfg.n;
    out["seed"] = cfg.seed;
    out["inner_radius"] = model.inner_radius;
    out["outer_radius"] = model.outer_radius;
    json pj = json::array();
    for (const auto& item : pred.items) {
        json ij;
        ij["location"] = complex_json(item.location);
        ij["source"] = complex_json(item.source);
        ij["multiplicity"] = item.multiplicity;
        pj.push_back(std::move(ij));
    }
    out["predicted"] = std::move(pj);
    json dj = json::array();
    for (const cd& z : detections) dj.push_back(complex_json(z));
    out["detected"] = std::move(dj);
    write_file(dir / "stats.json", out.dump(2) + "\n");
    std::cout << "predicted " << pred.items.size() << ", detected " << detections.size()
              << " outside the annulus margin\n";
    return 0;
}

int cmd_fluctuations(const Config& cfg) {
    if (!cfg.has_perturbation)
        config_error("perturbation", "fluctuations needs a perturbation spec");
    const auto model = SingleRingModel::make(cfg.profile, cfg.composition);
    const FluctuationScale fl = fluctuation_scale(cfg.perturbation, model, cfg.dims,
                                                  cfg.trials, cfg.seed, cfg.threads);

    json out;
    out["kind"] = "fluctuations";
    out["seed"] = cfg.seed;
    out["dims"] = fl.dims;
    out["trials_used"] = fl.trials_used;
    out["rms"] = fl.rms;
    out["slope"] = fl.slope;
    const fs::path dir = ensure_out_dir(cfg);
    write_file(dir / "stats.json", out.dump(2) + "\n");

    const OutlierPrediction pred = predict(cfg.perturbation, model);
    std::string pred_csv = "re_predicted,im_predicted,multiplicity\r\n";
    for (const auto& item : pred.items)
        pred_csv += fmt17(item.location.real()) + "," + fmt17(item.location.imag()) + "," +
                    std::to_string(item.multiplicity) + "\r\n";
    write_file(dir / "predictions.csv", pred_csv);
    std::cout << "slope " << fl.slope << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single Ring random-matrix laboratory"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may appear after the subcommand name

    std::string config_path, out_dir;
    std::int64_t seed = -1, trials = -1, dim = -1, threads = -1, korder = -1;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", seed, "master RNG seed");
    app.add_option("--trials", trials, "Monte Carlo trials");
    app.add_option("--dim", dim, "matrix dimension N");
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");
    app.add_option("--out", out_dir, "output directory");

    CLI::App* sub_spectrum = app.add_subcommand("spectrum", "eigenvalues of one sample");
    CLI::App* sub_cov = app.add_subcommand("covariance", "empirical vs limit covariances");
    CLI::App* sub_fluct = app.add_subcommand("fluctuations", "outlier fluctuation scaling");
    CLI::App* sub_wg = app.add_subcommand("weingarten", "exact Weingarten table");
    sub_wg->add_option("--k", korder, "moment order");
    CLI::App* sub_out = app.add_subcommand("outliers", "perturbation outlier experiment");
    CLI::App* sub_char = app.add_subcommand("charpoly", "log-characteristic polynomial");
    (void)sub_spectrum;
    (void)sub_fluct;
    (void)sub_out;
    (void)sub_char;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        Config cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot read config file " + config_path);
            json j;
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw ConfigError(std::string("config parse: ") + e.what());
            }
            parse_config_json(j, cfg);
        }
        // flags take precedence over the config file
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (trials >= 0) cfg.trials = static_cast<std::size_t>(trials);
        if (dim >= 0) cfg.n = static_cast<std::size_t>(dim);
        if (threads >= 0) cfg.threads = static_cast<int>(threads);
        if (korder >= 0) cfg.k = static_cast<int>(korder);
        if (!out_dir.empty()) cfg.out = out_dir;
        finalize_config(cfg);

        if (sub_cov->parsed()) return cmd_covariance(cfg);
        if (sub_wg->parsed()) return cmd_weingarten(cfg);
        if (app.get_subcommands().front()->get_name() == "spectrum") return cmd_spectrum(cfg);
        if (app.get_subcommands().front()->get_name() == "fluctuations")
            return cmd_fluctuations(cfg);
        if (app.get_subcommands().front()->get_name() == "outliers") return cmd_outliers(cfg);
        if (app.get_subcommands().front()->get_name() == "charpoly") return cmd_charpoly(cfg);
        std::cerr << "unknown subcommand\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
