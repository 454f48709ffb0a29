#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "moyal/grid.hpp"
#include "moyal/grid_star.hpp"
#include "moyal/integrate.hpp"
#include "moyal/models/damped.hpp"
#include "moyal/models/helium.hpp"
#include "moyal/models/oscillator.hpp"
#include "moyal/negativity.hpp"
#include "moyal/residual.hpp"
#include "moyal/star.hpp"
#include "moyal/wigner_transform.hpp"

namespace moyal::cli {

inline constexpr const char* kVersion = "moyal 1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kMismatch = 4, kVerifyFailed = 5 };

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters shared by all subcommands.
struct RunConfig {
    std::string model = "damped";  ///< harmonic | helium | damped
    int n = 0;
    std::optional<int> nu, nv;
    std::optional<double> lam, xi;
    double m = 1.0;
    double omega = 1.0;
    double hbar = 1.0;
    GridSpec grid{-6.0, 6.0, -6.0, 6.0, 201, 201};
    bool grid_set = false;  ///< true when any grid flag was given explicitly
    NegativityMethod method = NegativityMethod::radial;
    std::string out;
    std::string format;  ///< csv | json; empty selects the subcommand's native format
    int n_max = 9;
    double tol = 1e-3;
    bool check_table1 = false;
    double table1_tol = 1e-8;
    std::vector<double> lambda_scan;
    bool inject_sign_error = false;  ///< negative control for `verify`

    double lambda() const { return lam.value_or(0.0); }
    double xi_value() const { return xi.value_or(0.0); }
    HeliumParams helium() const { return {m, omega, xi_value(), hbar}; }

    /// Throws UsageError on an inconsistent combination.
    void validate() const {
        if (model != "harmonic" && model != "helium" && model != "damped")
            throw UsageError("unknown model '" + model + "' (expected harmonic, helium or damped)");
        if (lam && model != "damped") throw UsageError("--lambda applies only to the damped model");
        if (xi && model != "helium") throw UsageError("--xi applies only to the helium model");
        if ((nu || nv) && model != "helium") throw UsageError("--nu/--nv apply only to the helium model");
        if (model == "damped" && (m != 1.0 || omega != 1.0 || hbar != 1.0))
            throw UsageError("the damped model is dimensionless; --mass, --omega and --hbar must be 1");
        if (!(m > 0.0) || !(omega > 0.0) || !(hbar > 0.0)) throw UsageError("--mass, --omega and --hbar must be positive");
        if (n < 0 || nu.value_or(0) < 0 || nv.value_or(0) < 0) throw UsageError("quantum numbers must be nonnegative");
        if (!(std::abs(lambda()) < 1.0)) throw UsageError("--lambda must satisfy |lambda| < 1");
        if (!(xi_value() >= 0.0 && xi_value() < 1.0)) throw UsageError("--xi must satisfy 0 <= xi < 1");
        for (double l : lambda_scan)
            if (!(std::abs(l) < 1.0)) throw UsageError("--lambda-scan values must satisfy |lambda| < 1");
        if (!format.empty() && format != "csv" && format != "json") throw UsageError("--format must be csv or json");
        if (!(tol > 0.0) || !(table1_tol > 0.0)) throw UsageError("tolerances must be positive");
        if (n_max < 0) throw UsageError("--n-max must be nonnegative");
        try {
            grid.validate();
        } catch (const ParameterError& e) {
            throw UsageError(e.what());
        }
    }
};

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    return os;
}

inline void finish_output(std::ofstream& os, const std::string& path) {
    os.flush();
    if (!os) throw IoError("failed writing '" + path + "'");
}

/// Write `text` to cfg.out, or to `stdout_stream` when no path was given.
inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& stdout_stream) {
    if (cfg.out.empty()) {
        stdout_stream << text;
        return;
    }
    std::ofstream os = open_output(cfg.out);
    os << text;
    finish_output(os, cfg.out);
}

inline std::string sector_path(const std::string& out, const char* tag) {
    std::filesystem::path p(out);
    const std::string ext = p.extension() == ".csv" ? ".csv" : p.extension().string() + ".csv";
    p.replace_extension();
    return p.string() + "_" + tag + ext;
}

inline void write_field(const std::string& path, const GridField& f, const std::string& model,
                        const std::string& params) {
    std::ofstream os = open_output(path);
    write_grid_csv(os, f,
                   {{"model", model},
                    {"params", params},
                    {"normalization", format_double(f.integral().real())},
                    {"version", kVersion}});
    finish_output(os, path);
}

inline nlohmann::json to_json(const NegativityRecord& r) {
    return {{"model", r.model},   {"n", r.n},       {"lam", r.lam}, {"method", to_string(r.method)},
            {"eta", r.eta},       {"err_estimate", r.err_estimate}};
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Purity and cross-engine tolerances for a grid of the given resolution.
inline double verify_grid_tolerance(int n) { return n >= 128 ? 1e-4 : n >= 64 ? 1e-3 : 1e-2; }

}  // namespace detail

/// Sample the Wigner function of the configured state to CSV.  Helium writes one file per sector.
inline int cmd_wigner(const RunConfig& cfg, std::ostream& log = std::cerr) {
    cfg.validate();
    if (cfg.out.empty()) throw UsageError("wigner requires --out");
    if (cfg.format == "json") throw UsageError("wigner output is CSV");
    if (cfg.model == "helium") {
        const HeliumParams hp = cfg.helium();
        const HeliumState st = helium_excite(helium_ground(hp), cfg.nu.value_or(0), cfg.nv.value_or(0));
        const auto [wu, wv] = helium_wigner(st);
        const std::string params = "nu=" + std::to_string(st.nu) + " nv=" + std::to_string(st.nv) +
                                   " xi=" + format_double(hp.xi) + " m=" + format_double(hp.m) +
                                   " omega=" + format_double(hp.omega) + " hbar=" + format_double(hp.hbar);
        const std::string pu = detail::sector_path(cfg.out, "u"), pv = detail::sector_path(cfg.out, "v");
        detail::write_field(pu, sample(wu, cfg.grid), "helium", params + " sector=u");
        detail::write_field(pv, sample(wv, cfg.grid), "helium", params + " sector=v");
        log << "wrote " << pu << " and " << pv << "\n";
        return kOk;
    }
    GridField f;
    std::string params;
    if (cfg.model == "damped") {
        f = sample(damped_wigner({cfg.lambda(), cfg.n}), cfg.grid);
        params = "n=" + std::to_string(cfg.n) + " lambda=" + format_double(cfg.lambda());
    } else {
        const OscillatorSector osc{cfg.m, cfg.omega, cfg.hbar};
        f = sample(osc.wigner(cfg.n), cfg.grid);
        params = "n=" + std::to_string(cfg.n) + " m=" + format_double(cfg.m) + " omega=" + format_double(cfg.omega) +
                 " hbar=" + format_double(cfg.hbar);
    }
    for (const auto& w : f.warnings) log << "warning: " << w << "\n";
    detail::write_field(cfg.out, f, cfg.model, params);
    log << "wrote " << cfg.out << "\n";
    return kOk;
}

/// Energies for n = 0..n_max as JSON; helium lists every (nu, nv) pair with the first-order value.
inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out = std::cout) {
    cfg.validate();
    if (cfg.format == "csv") throw UsageError("spectrum output is JSON");
    nlohmann::json arr = nlohmann::json::array();
    if (cfg.model == "helium") {
        const HeliumParams hp = cfg.helium();
        for (int nu = 0; nu <= cfg.n_max; ++nu)
            for (int nv = 0; nv <= cfg.n_max; ++nv)
                arr.push_back({{"nu", nu},
                               {"nv", nv},
                               {"E", helium_energy(nu, nv, hp)},
                               {"E_first_order", helium_energy_first_order(nu, nv, hp)}});
    } else if (cfg.model == "damped") {
        for (int n = 0; n <= cfg.n_max; ++n) arr.push_back({{"n", n}, {"E", damped_energy({cfg.lambda(), n})}});
    } else {
        const OscillatorSector osc{cfg.m, cfg.omega, cfg.hbar};
        for (int n = 0; n <= cfg.n_max; ++n) arr.push_back({{"n", n}, {"E", osc.energy(n)}});
    }
    detail::emit(cfg, detail::dump(arr), out);
    return kOk;
}

/// Negativity table, optional comparison with the published table, or a lambda scan.
inline int cmd_negativity(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& log = std::cerr) {
    cfg.validate();
    if (cfg.model == "helium") throw UsageError("negativity supports the damped and harmonic models");
    if (cfg.format == "csv") throw UsageError("negativity output is JSON");

    if (!cfg.lambda_scan.empty()) {
        const LambdaScanReport rep = lambda_scan(cfg.n, cfg.lambda_scan, cfg.tol);
        nlohmann::json grid = nlohmann::json::array();
        for (const auto& r : rep.grid) grid.push_back(detail::to_json(r));
        const nlohmann::json j = {{"n", rep.n},
                                  {"tol", rep.tol},
                                  {"radial", detail::to_json(rep.radial)},
                                  {"grid", grid},
                                  {"max_deviation", rep.max_deviation},
                                  {"passed", rep.passed}};
        detail::emit(cfg, detail::dump(j), out);
        if (!rep.passed) {
            log << "lambda scan failed for n = " << rep.n << " (radial eta " << format_double(rep.radial.eta) << ")\n";
            for (const auto& r : rep.grid)
                log << "  lambda " << format_double(r.lam) << ": eta " << format_double(r.eta) << ", deviation "
                    << format_double(std::abs(r.eta - rep.radial.eta)) << "\n";
            return kMismatch;
        }
        return kOk;
    }

    const double lam = cfg.model == "damped" ? cfg.lambda() : 0.0;
    auto recs = negativity_table(cfg.n_max, lam, cfg.method, cfg.tol);
    if (cfg.model == "harmonic")
        for (auto& r : recs) r.model = "harmonic";
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : recs) arr.push_back(detail::to_json(r));
    detail::emit(cfg, detail::dump(arr), out);

    if (cfg.check_table1) {
        bool ok = true;
        for (const auto& r : recs) {
            if (r.n >= static_cast<int>(kTable1Eta.size())) break;
            const double d = std::abs(r.eta - kTable1Eta[r.n]);
            if (d > cfg.table1_tol) {
                if (ok) log << "table check failed (tolerance " << format_double(cfg.table1_tol) << ")\n";
                ok = false;
                log << "  n " << r.n << ": computed " << format_double(r.eta) << ", table "
                    << format_double(kTable1Eta[r.n]) << ", diff " << format_double(d) << "\n";
            }
        }
        if (!ok) return kMismatch;
    }
    return kOk;
}

/// Cross-engine invariant suite.  Prints one PASS/FAIL line per check.
inline int cmd_verify(const RunConfig& cfg, std::ostream& out = std::cout) {
    cfg.validate();
    const GridSpec grid = cfg.grid_set ? cfg.grid : GridSpec{-8.0, 8.0, -8.0, 8.0, 128, 128};
    const double grid_tol = detail::verify_grid_tolerance(std::min(grid.nq, grid.np));

    auto wigner_damped = [&](double lam, int n) {
        const PolyGauss W = damped_wigner({lam, n});
        return cfg.inject_sign_error && n % 2 ? scale(W, -1.0) : W;
    };

    int failures = 0;
    auto report = [&](const std::string& name, double value, double tol) {
        const bool pass = value <= tol;
        if (!pass) ++failures;
        out << (pass ? "PASS " : "FAIL ") << name << ": " << format_double(value) << " (tol " << format_double(tol)
            << ")\n";
    };

    // symbolic purity
    {
        double worst = 0.0;
        const Box box{};
        const auto pts = sample_points(box, 400);
        auto purity = [&](const PolyGauss& W, double hbar) {
            const PolyGauss WW = polygauss_star(W, W);
            const PolyGauss ref = scale(W, 1.0 / (2.0 * M_PI * hbar));
            double d = 0.0;
            for (const auto& x : pts) d = std::max(d, std::abs(WW(x[0], x[1]) - ref(x[0], x[1])));
            worst = std::max(worst, d / max_abs_on_box(ref, box, pts));
        };
        for (int n = 0; n <= 3; ++n) {
            purity(OscillatorSector{}.wigner(n), 1.0);
            purity(wigner_damped(0.5, n), 1.0);
        }
        const HeliumParams hp{1.0, 1.0, 0.1, 1.0};
        for (int k = 0; k <= 2; ++k) {
            const auto [wu, wv] = helium_wigner(helium_excite(helium_ground(hp), k));
            purity(wu, hp.hbar);
            purity(wv, hp.hbar);
        }
        report("purity (symbolic)", worst, 1e-9);
    }

    // grid purity
    {
        double worst = 0.0;
        for (const PolyGauss& W : {OscillatorSector{}.wigner(0), OscillatorSector{}.wigner(1), wigner_damped(0.5, 2)}) {
            const GridField g = sample(W, grid);
            GridField ref = g;
            ref *= 1.0 / (2.0 * M_PI);
            worst = std::max(worst, grid_distance(ref, star_numeric(g, g)).sup_rel);
        }
        report("purity (grid " + std::to_string(grid.nq) + "x" + std::to_string(grid.np) + ")", worst, grid_tol);
    }

    // cross-engine star product
    {
        const PolyGauss f = damped_quasiamplitude({0.3, 2});
        const PolyGauss g = multiply(Polynomial::q() + Polynomial::p() * cplx(0.0, 1.0), 
                                     PolyGauss::gaussian(QuadForm::make(0.8, 0.1, 0.6, 0.2, -0.1), 1.0));
        double worst = 0.0;
        for (const auto& [a, b] : {std::pair{f, conj(f)}, std::pair{g, f}}) {
            const GridField num = star_numeric(sample(a, grid), sample(b, grid));
            worst = std::max(worst, grid_distance(sample(polygauss_star(a, b), grid), num).sup_rel);
        }
        report("star product, symbolic vs grid", worst, 1e-2 * grid_tol);
    }

    // canonical commutator q*p - p*q = i hbar on a Gaussian test function
    {
        const double hbar = 0.7;
        const PolyGauss f =
            PolyGauss::gaussian(QuadForm::make(1.1, 0.2, 0.9, 0.3, 0.1), hbar);
        const PolyGauss qp = star_left(Polynomial::q(), star_left(Polynomial::p(), f));
        const PolyGauss pq = star_left(Polynomial::p(), star_left(Polynomial::q(), f));
        const Polynomial d = subtract(qp, pq).polynomial() - Polynomial::constant(cplx(0.0, hbar));
        report("Heisenberg relation", d.max_abs_coefficient(), 1e-13);
    }

    // spectra
    {
        double worst = 0.0;
        for (double lam : {0.0, 0.1, 0.5, 0.9})
            for (int n = 0; n <= 10; ++n)
                worst = std::max(worst, eigen_residual(damped_hamiltonian(lam), wigner_damped(lam, n),
                                                       damped_energy({lam, n}), Box{}, 100));
        report("damped eigen-residual", worst, 1e-9);
        const HeliumParams hp{1.0, 1.0, 0.1, 1.0};
        double he = 0.0;
        for (int k = 0; k <= 2; ++k)
            he = std::max(he, helium_eigen_residual(helium_excite(helium_ground(hp), k), helium_energy(k, k, hp), Box{},
                                                    200));
        report("helium eigen-residual", he, 1e-10);
    }

    // normalization and parity
    {
        double norm = 0.0, parity = 0.0;
        for (double lam : {0.0, 0.5, 0.9})
            for (int n = 0; n <= 10; ++n) {
                const PolyGauss W = wigner_damped(lam, n);
                norm = std::max(norm, std::abs(integrate(W) - 1.0));
                parity = std::max(parity, std::abs(M_PI * W(0.0, 0.0).real() - (n % 2 ? -1.0 : 1.0)));
            }
        report("damped normalization", norm, 1e-10);
        report("damped parity at the origin", parity, 1e-12);
    }

    // closed form versus the wavefunction transform at lambda = 0
    {
        const GridSpec s = GridSpec::square(6.0, 61);
        double worst = 0.0;
        for (int n = 0; n <= 5; ++n) {
            const GridField ref =
                wigner_from_wavefunction([n](double x) { return cplx(hermite_function(n, x)); }, 12.0, s);
            const GridField w = sample(wigner_damped(0.0, n), s);
            for (std::size_t k = 0; k < w.values.size(); ++k)
                worst = std::max(worst, std::abs(w.values[k] - ref.values[k]));
        }
        report("lambda = 0 against wavefunction transform", worst, 1e-6);
    }

    // negativity: two methods
    {
        const LambdaScanReport rep = lambda_scan(1, {0.0, 0.6}, 1e-3);
        report("negativity lambda independence (n = 1)", rep.max_deviation, 1e-3);
    }

    out << (failures == 0 ? "all checks passed\n" : std::to_string(failures) + " check(s) failed\n");
    return failures == 0 ? kOk : kVerifyFailed;
}

/// Run `fn`, mapping exceptions to exit codes and messages on `log`.
inline int run_guarded(const std::function<int()>& fn, std::ostream& log = std::cerr) {
    try {
        return fn();
    } catch (const UsageError& e) {
        log << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParameterError& e) {
        log << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        log << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace moyal::cli
