#include "susy/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "susy/errors.hpp"
#include "susy/expalg.hpp"
#include "susy/nr.hpp"
#include "susy/oracle.hpp"

namespace susy::cli {

namespace {

const NRParams fig2_defaults{1.5, 0.5};
const DiracParams fig3_defaults{1.0, 2.0, 1.0, 0.1};
constexpr int figure_samples = 512;

constexpr std::pair<Mode, const char*> mode_names[] = {
    {Mode::nr_spectrum, "nr-spectrum"},
    {Mode::nr_eigenfunctions, "nr-eigenfunctions"},
    {Mode::dirac_spectrum, "dirac-spectrum"},
    {Mode::dirac_eigenfunctions, "dirac-eigenfunctions"},
    {Mode::fig2, "fig2"},
    {Mode::fig3, "fig3"},
    {Mode::verify, "verify"},
};

bool is_dirac_mode(Mode mode)
{
    return mode == Mode::dirac_spectrum || mode == Mode::dirac_eigenfunctions || mode == Mode::fig3;
}

bool needs_parameters(Mode mode) { return mode != Mode::fig2 && mode != Mode::fig3 && mode != Mode::verify; }

std::string family_list(const std::vector<dirac::Family>& families)
{
    std::string out;
    for (const auto fam : families) {
        if (!out.empty()) {
            out += ',';
        }
        out += dirac::to_char(fam);
    }
    return out;
}

// ---- parameter resolution ---------------------------------------------------

double pick(const std::optional<double>& given, double fallback) { return given ? *given : fallback; }

NRParams resolve_nr(const RunConfig& config)
{
    if (config.physical) {
        return NRParams::from_physical(*config.physical);
    }
    NRParams p = fig2_defaults;
    if (config.dimensionless) {
        p.a = pick(config.dimensionless->a, p.a);
        p.b = pick(config.dimensionless->b, p.b);
    }
    p.validate();
    return p;
}

DiracParams resolve_dirac(const RunConfig& config)
{
    if (config.physical) {
        return DiracParams::from_physical(*config.physical);
    }
    DiracParams p = fig3_defaults;
    if (config.dimensionless) {
        p.a = pick(config.dimensionless->a, p.a);
        p.b = pick(config.dimensionless->b, p.b);
        p.d0 = pick(config.dimensionless->d0, p.d0);
        p.mbar = pick(config.dimensionless->mbar, p.mbar);
    }
    p.validate();
    return p;
}

/// Sample radii rho_max i / N for i = 1..N.
std::vector<double> sample_radii(double rho_max, int count)
{
    std::vector<double> out;
    out.reserve(count);
    for (int i = 1; i <= count; ++i) {
        out.push_back(rho_max * i / count);
    }
    return out;
}

// ---- tables -----------------------------------------------------------------

std::vector<double> sample_real(const expalg::ExpoPoly& p, const std::vector<double>& radii)
{
    std::vector<double> out;
    out.reserve(radii.size());
    for (double rho : radii) {
        out.push_back(expalg::eval(p, rho).real());
    }
    return out;
}

std::vector<double> sample_density(const dirac::SpinorFn& f, const std::vector<double>& radii)
{
    std::vector<double> out;
    out.reserve(radii.size());
    for (double rho : radii) {
        out.push_back(dirac::eval(f, rho).squaredNorm());
    }
    return out;
}

Table nr_energy_table(const NRParams& p, int levels)
{
    std::vector<long long> n;
    std::vector<double> energy;
    for (int k = 0; k < levels; ++k) {
        n.push_back(k);
        energy.push_back(nr::spectrum_radial(p, k));
    }
    return Table{"energies", {{"n", n}, {"energy", energy}}};
}

Table nr_sample_table(const NRParams& p, int levels, const RunConfig& config)
{
    const double rho_max = config.rho_max ? *config.rho_max : nr::default_rho_max(p, levels - 1);
    const auto radii = sample_radii(rho_max, config.grid_points.value_or(figure_samples));
    Table t{"samples", {{"rho", radii}, {"V0", sample_real(nr::potential(p, 0), radii)}}};
    for (int k = 0; k < levels; ++k) {
        t.columns.emplace_back("G" + std::to_string(k), sample_real(nr::normalize(nr::eigenfunction(p, k)), radii));
    }
    return t;
}

Table nr_physical_table(const PhysicalParams& phys, int levels)
{
    std::vector<long long> n;
    std::vector<double> energy;
    for (int k = 0; k < levels; ++k) {
        n.push_back(k);
        energy.push_back(nr::spectrum_physical(phys, k));
    }
    return Table{"physical_energies", {{"n", n}, {"energy", energy}}};
}

Table dirac_eigenvalue_table(const DiracParams& p, int levels, const std::vector<dirac::Family>& families)
{
    std::vector<std::string> fam_col;
    std::vector<long long> n;
    std::vector<double> value;
    for (const auto fam : families) {
        for (int k = 0; k < levels; ++k) {
            fam_col.emplace_back(1, dirac::to_char(fam));
            n.push_back(k);
            value.push_back(dirac::eigenvalue(p, k, fam));
        }
    }
    return Table{"eigenvalues", {{"family", fam_col}, {"n", n}, {"eigenvalue", value}}};
}

Table dirac_physical_table(const PhysicalParams& phys, int levels, const std::vector<dirac::Family>& families)
{
    std::vector<std::string> fam_col;
    std::vector<long long> n;
    std::vector<double> value;
    for (const auto fam : families) {
        const int sign = (fam == dirac::Family::a || fam == dirac::Family::c) ? 1 : -1;
        const int shift = (fam == dirac::Family::c || fam == dirac::Family::d) ? 1 : 0;
        for (int k = 0; k < levels; ++k) {
            fam_col.emplace_back(1, dirac::to_char(fam));
            n.push_back(k);
            value.push_back(dirac::spectrum_dirac(phys, k + shift, sign));
        }
    }
    return Table{"physical_energies", {{"family", fam_col}, {"n", n}, {"energy", value}}};
}

Table dirac_sample_table(const DiracParams& p, int levels, const std::vector<dirac::Family>& families,
                         const RunConfig& config)
{
    const double rho_max = config.rho_max ? *config.rho_max : dirac::default_rho_max(p, levels - 1);
    const auto radii = sample_radii(rho_max, config.grid_points.value_or(figure_samples));
    Table t{"samples", {{"rho", radii}}};
    for (const auto fam : families) {
        for (int k = 0; k < levels; ++k) {
            t.columns.emplace_back(std::string("density_") + dirac::to_char(fam) + std::to_string(k),
                                   sample_density(dirac::normalized_chain(p, k, fam), radii));
        }
    }
    return t;
}

// ---- verification -------------------------------------------------------------

/// Largest coefficient magnitude relative to the polynomial's scale.
double residual_size(const expalg::ExpoPoly& p)
{
    double worst = 0.0;
    for (const auto& t : p.terms()) {
        worst = std::max(worst, std::abs(t.coeff));
    }
    return worst / std::max(1.0, p.scale());
}

double residual_size(const dirac::SpinorFn& f)
{
    double worst = 0.0;
    for (const auto& c : f.components) {
        worst = std::max(worst, residual_size(c));
    }
    return worst;
}

class CheckTable {
public:
    void add(const std::string& name, double value, double threshold)
    {
        const bool ok = std::isfinite(value) && value <= threshold;
        names_.push_back(name);
        values_.push_back(value);
        thresholds_.push_back(threshold);
        status_.emplace_back(ok ? "PASS" : "FAIL");
        passed_ = passed_ && ok;
    }

    /// Runs `metric`; a thrown susy::Error counts as a failure with value inf.
    void run(const std::string& name, double threshold, const std::function<double()>& metric)
    {
        double value = INFINITY;
        try {
            value = metric();
        } catch (const Error&) {
        }
        add(name, value, threshold);
    }

    bool passed() const { return passed_; }

    Table table() const
    {
        return Table{"checks", {{"check", names_}, {"value", values_}, {"threshold", thresholds_}, {"status", status_}}};
    }

private:
    std::vector<std::string> names_;
    std::vector<double> values_;
    std::vector<double> thresholds_;
    std::vector<std::string> status_;
    bool passed_ = true;
};

constexpr double symbolic_tol = 1e-11;

void verify_nr(const NRParams& p, const RunConfig& config, CheckTable& checks)
{
    const int levels = config.levels;
    const int points = config.grid_points.value_or(oracle::default_points);
    const auto ctx = nr::context(p);

    checks.run("nr.riccati", symbolic_tol, [&] {
        double worst = 0.0;
        for (int n = 1; n <= levels; ++n) {
            worst = std::max(worst, residual_size(nr::riccati_residual(p, n)));
        }
        return worst;
    });
    checks.run("nr.factorization_intertwining", symbolic_tol, [&] {
        double worst = 0.0;
        for (int n = 1; n <= levels; ++n) {
            // a fixed probe mixing plain and rho^a powers with two decays
            const auto f = expalg::ExpoPoly(ctx, {{1.0, {1, 1}, expalg::DecayIndex::indexed(1)},
                                                  {-0.5, {0, 2}, expalg::DecayIndex::indexed(0)},
                                                  {0.25, {1, 0}, expalg::DecayIndex::zero()}});
            const double eps = nr::factorization_energy(p, n);
            const auto up = nr::creation(p, n);
            const auto down = nr::annihilation(p, n);
            const auto lower = nr::apply_hamiltonian(p, n - 1, f) -
                               (nr::apply_ladder(down, nr::apply_ladder(up, f)) + eps * f);
            const auto upper =
                nr::apply_hamiltonian(p, n, f) - (nr::apply_ladder(up, nr::apply_ladder(down, f)) + eps * f);
            const auto inter = nr::apply_hamiltonian(p, n, nr::apply_ladder(up, f)) -
                               nr::apply_ladder(up, nr::apply_hamiltonian(p, n - 1, f));
            worst = std::max({worst, residual_size(lower), residual_size(upper), residual_size(inter)});
        }
        return worst;
    });

    std::vector<expalg::ExpoPoly> states;
    for (int n = 0; n < levels; ++n) {
        states.push_back(nr::eigenfunction(p, n));
    }
    checks.run("nr.eigen_equation", symbolic_tol, [&] {
        double worst = 0.0;
        for (int n = 0; n < levels; ++n) {
            worst = std::max(worst, residual_size(nr::apply_hamiltonian(p, 0, states[n]) -
                                                  nr::spectrum_radial(p, n) * states[n]));
        }
        return worst;
    });
    checks.run("nr.orthogonality", 1e-9, [&] {
        double worst = 0.0;
        for (int m = 0; m < levels; ++m) {
            for (int n = m + 1; n < levels; ++n) {
                const double nm = std::sqrt(expalg::inner_product(states[m], states[m]).real());
                const double nn = std::sqrt(expalg::inner_product(states[n], states[n]).real());
                worst = std::max(worst, std::abs(expalg::inner_product(states[m], states[n])) / (nm * nn));
            }
        }
        return worst;
    });
    checks.run("nr.node_count", 0.0, [&] {
        double worst = 0.0;
        for (int n = 0; n < levels; ++n) {
            const auto nodes = nr::find_nodes(states[n], nr::default_rho_max(p, n));
            worst = std::max(worst, std::abs(static_cast<double>(nodes.size()) - n));
        }
        return worst;
    });
    checks.run("nr.fd_eigenvalues", 1e-5, [&] {
        const double rho_max = config.rho_max ? *config.rho_max : 40.0 * (p.a + levels + 1) / p.b;
        const auto grid = oracle::RadialGrid::with_fraction(rho_max, points, oracle::eigen_rho_min_fraction);
        const auto eigs = oracle::fd_schrodinger_eigs(p, levels, grid);
        double worst = 0.0;
        for (int n = 0; n < levels; ++n) {
            worst = std::max(worst, std::abs(eigs.at(n) - nr::spectrum_radial(p, n)));
        }
        return worst;
    });
    checks.run("nr.residuals", config.tolerance, [&] {
        double worst = 0.0;
        for (int n = 0; n < levels; ++n) {
            const auto grid = oracle::RadialGrid::with_fraction(nr::default_rho_max(p, n), points,
                                                                oracle::residual_rho_min_fraction);
            const auto samples = sample_real(states[n], grid.points());
            worst = std::max(worst,
                             oracle::residual_scalar(samples, nr::spectrum_radial(p, n), p, grid).relative_l2());
        }
        return worst;
    });
}

void verify_dirac(const DiracParams& p, const RunConfig& config, CheckTable& checks)
{
    const int levels = config.levels;
    const int points = config.grid_points.value_or(oracle::default_points);
    const auto ctx = dirac::context(p);

    checks.run("dirac.kernels", symbolic_tol, [&] {
        double worst = 0.0;
        for (int n = 0; n < levels; ++n) {
            const auto b = dirac::b_dagger(p, n);
            worst = std::max({worst, residual_size(b.apply(dirac::kernel_chi(p, n))),
                              residual_size(b.apply(dirac::kernel_xi(p, n)))});
        }
        return worst;
    });
    checks.run("dirac.intertwining", symbolic_tol, [&] {
        double worst = 0.0;
        const expalg::ExpoPoly probe(ctx, {{1.0, {1, 1}, expalg::DecayIndex::indexed(1)},
                                           {expalg::Complex(0.0, -0.5), {0, 2}, expalg::DecayIndex::indexed(0)}});
        const expalg::ExpoPoly other(ctx, {{0.3, {1, 0}, expalg::DecayIndex::zero()},
                                           {-1.0, {0, 1}, expalg::DecayIndex::indexed(2)}});
        const dirac::SpinorFn f{{probe, other, other, probe}};
        for (int n = 0; n < levels; ++n) {
            const auto ad = dirac::a_dagger(p, n);
            const auto lhs = dirac::big_hamiltonian(p, n + 1).apply(ad.apply(f));
            const auto rhs = ad.apply(dirac::big_hamiltonian(p, n).apply(f));
            worst = std::max(worst, residual_size(dirac::subtract(lhs, rhs)));
        }
        return worst;
    });

    std::vector<std::pair<dirac::Family, int>> keys;
    std::vector<dirac::SpinorFn> chains;
    for (const auto fam : config.families) {
        for (int n = 0; n < levels; ++n) {
            keys.emplace_back(fam, n);
        }
    }
    checks.run("dirac.eigen_equation", symbolic_tol, [&] {
        double worst = 0.0;
        const auto h0 = dirac::big_hamiltonian(p, 0);
        for (const auto& [fam, n] : keys) {
            chains.push_back(dirac::eigenfunction_chain(p, n, fam));
            const auto& phi = chains.back();
            const double e = dirac::eigenvalue(p, n, fam);
            worst = std::max(worst, residual_size(dirac::subtract(h0.apply(phi), dirac::scale(e, phi))));
        }
        return worst;
    });
    checks.run("dirac.xi_identity", 1e-8, [&] {
        const std::vector<double> radii{0.5, 1.0, 2.0, 5.0};
        double worst = 0.0;
        for (int n = 0; n <= std::min(1, levels - 1); ++n) {
            worst = std::max(worst, dirac::superpotential_matrix_residual(p, n, radii).max_residual);
        }
        return worst;
    });
    checks.run("dirac.residuals", config.tolerance, [&] {
        if (chains.size() != keys.size()) {
            throw Error("chains unavailable");
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const auto [fam, n] = keys[i];
            const auto grid = oracle::RadialGrid::with_fraction(dirac::default_rho_max(p, n), points,
                                                                oracle::residual_rho_min_fraction);
            oracle::SampledSpinor samples;
            for (double rho : grid.points()) {
                const auto v = dirac::eval(chains[i], rho);
                for (int c = 0; c < 4; ++c) {
                    samples[c].push_back(v(c));
                }
            }
            worst = std::max(worst,
                             oracle::residual_dirac(samples, dirac::eigenvalue(p, n, fam), p, grid).relative_l2());
        }
        return worst;
    });
    checks.run("dirac.scan", 1e-3, [&] {
        // window from below the lowest level to halfway past level levels-1
        std::vector<double> expected;
        for (int n = 0; n < levels; ++n) {
            expected.push_back(dirac::eigenvalue(p, n, dirac::Family::a));
            if (n >= 1) {
                expected.push_back(dirac::eigenvalue(p, n - 1, dirac::Family::c));
            }
        }
        std::sort(expected.begin(), expected.end());
        const double lo = 0.9 * expected.front();
        const double hi = 0.5 * (dirac::eigenvalue(p, levels - 1, dirac::Family::a) +
                                 dirac::eigenvalue(p, levels, dirac::Family::a));
        const double rho_max = config.rho_max ? *config.rho_max : dirac::default_rho_max(p, levels);
        const auto grid = oracle::RadialGrid::with_fraction(rho_max, oracle::scan_points, oracle::scan_rho_min_fraction);
        const auto found = oracle::dirac_spectrum_scan(p, {lo, hi}, grid);
        if (found.size() != expected.size()) {
            return static_cast<double>(INFINITY);
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < found.size(); ++i) {
            worst = std::max(worst, std::abs(found[i] - expected[i]));
        }
        return worst;
    });
}

void add_parameter_meta(const RunConfig& config, Output& out)
{
    if (config.physical) {
        const auto& ph = *config.physical;
        out.meta.emplace_back("parameter_style", std::string("physical"));
        for (const auto& [key, value] : {std::pair<const char*, double>{"hbar", ph.hbar},
                                         {"m", ph.m},
                                         {"c", ph.c},
                                         {"e", ph.e},
                                         {"k", ph.k},
                                         {"pz", ph.pz},
                                         {"ell", ph.ell}}) {
            out.meta.emplace_back(key, value);
        }
    } else if (config.dimensionless) {
        out.meta.emplace_back("parameter_style", std::string("dimensionless"));
        const auto& d = *config.dimensionless;
        for (const auto& [key, value] : {std::pair<const char*, std::optional<double>>{"a", d.a},
                                         {"b", d.b},
                                         {"d0", d.d0},
                                         {"mbar", d.mbar}}) {
            if (value) {
                out.meta.emplace_back(key, *value);
            }
        }
    } else {
        out.meta.emplace_back("parameter_style", std::string("default"));
    }
}

void add_config_meta(const RunConfig& config, Output& out)
{
    out.meta.emplace_back("levels", static_cast<long long>(config.levels));
    out.meta.emplace_back("families", family_list(config.families));
    out.meta.emplace_back("grid_points", config.grid_points ? Scalar(static_cast<long long>(*config.grid_points))
                                                            : Scalar(std::string("default")));
    out.meta.emplace_back("rho_max", config.rho_max ? Scalar(*config.rho_max) : Scalar(std::string("default")));
    out.meta.emplace_back("tolerance", config.tolerance);
    out.meta.emplace_back("format", std::string(config.format == Format::csv ? "csv" : "json"));
}

void add_resolved(const std::string& prefix, const std::vector<std::pair<std::string, double>>& values, Output& out)
{
    for (const auto& [key, value] : values) {
        out.meta.emplace_back(prefix + key, value);
    }
}

// ---- rendering ----------------------------------------------------------------

std::string render_csv_scalar(const Scalar& s)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_real(v);
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v);
            } else {
                return v;
            }
        },
        s);
}

std::string render_json_real(double v)
{
    if (!std::isfinite(v)) {
        return "null";
    }
    return format_real(v);
}

std::string render_json_scalar(const Scalar& s)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return render_json_real(v);
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v);
            } else {
                return nlohmann::json(v).dump();
            }
        },
        s);
}

std::string csv_cell(const Column& col, std::size_t row)
{
    return std::visit(
        [row](const auto& v) -> std::string {
            using T = typename std::decay_t<decltype(v)>::value_type;
            if constexpr (std::is_same_v<T, double>) {
                return format_real(v[row]);
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(v[row]);
            } else {
                return v[row];
            }
        },
        col);
}

std::string json_array(const Column& col)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = typename std::decay_t<decltype(v)>::value_type;
            std::string out = "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i > 0) {
                    out += ", ";
                }
                if constexpr (std::is_same_v<T, double>) {
                    out += render_json_real(v[i]);
                } else if constexpr (std::is_same_v<T, long long>) {
                    out += std::to_string(v[i]);
                } else {
                    out += nlohmann::json(v[i]).dump();
                }
            }
            return out + "]";
        },
        col);
}

} // namespace

std::string to_string(Mode mode)
{
    for (const auto& [m, name] : mode_names) {
        if (m == mode) {
            return name;
        }
    }
    return "unknown";
}

Mode mode_from_string(const std::string& name)
{
    for (const auto& [m, n] : mode_names) {
        if (name == n) {
            return m;
        }
    }
    throw InvalidParameters("unknown mode '" + name + "'");
}

void RunConfig::validate() const
{
    if (levels < 1) {
        throw InvalidParameters("levels must be at least 1");
    }
    if (dimensionless && physical) {
        throw InvalidParameters("give either dimensionless or physical parameters, not both");
    }
    if (families.empty()) {
        throw InvalidParameters("at least one family is required");
    }
    if (grid_points && *grid_points < 2) {
        throw InvalidParameters("grid points must be at least 2");
    }
    if (rho_max && !(*rho_max > 0.0)) {
        throw InvalidParameters("rho max must be positive");
    }
    if (!(tolerance > 0.0)) {
        throw InvalidParameters("tolerance must be positive");
    }
    if (needs_parameters(mode) && !dimensionless && !physical) {
        throw InvalidParameters(to_string(mode) + " needs parameters (--a --b ... or --hbar --m ...)");
    }
    if (needs_parameters(mode) && dimensionless) {
        if (!dimensionless->a || !dimensionless->b) {
            throw InvalidParameters("--a and --b are required");
        }
        if (is_dirac_mode(mode) && (!dimensionless->d0 || !dimensionless->mbar)) {
            throw InvalidParameters("Dirac modes need --d0 and --mbar as well");
        }
    }
}

std::size_t Table::rows() const
{
    if (columns.empty()) {
        return 0;
    }
    return std::visit([](const auto& v) { return v.size(); }, columns.front().second);
}

std::string format_real(double value)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.16e", value);
    return buffer;
}

Output run(const RunConfig& config)
{
    config.validate();
    Output out;
    out.meta.emplace_back("tool", std::string("susy-ladder"));
    out.meta.emplace_back("mode", to_string(config.mode));
    add_parameter_meta(config, out);
    add_config_meta(config, out);

    switch (config.mode) {
    case Mode::nr_spectrum:
    case Mode::nr_eigenfunctions:
    case Mode::fig2: {
        const auto p = resolve_nr(config);
        add_resolved("resolved_", {{"a", p.a}, {"b", p.b}}, out);
        if (config.mode != Mode::nr_spectrum) {
            out.tables.push_back(nr_sample_table(p, config.levels, config));
        }
        out.tables.push_back(nr_energy_table(p, config.levels));
        if (config.physical) {
            out.tables.push_back(nr_physical_table(*config.physical, config.levels));
        }
        break;
    }
    case Mode::dirac_spectrum:
    case Mode::dirac_eigenfunctions:
    case Mode::fig3: {
        const auto p = resolve_dirac(config);
        add_resolved("resolved_", {{"a", p.a}, {"b", p.b}, {"d0", p.d0}, {"mbar", p.mbar}}, out);
        if (config.mode != Mode::dirac_spectrum) {
            out.tables.push_back(dirac_sample_table(p, config.levels, config.families, config));
        }
        out.tables.push_back(dirac_eigenvalue_table(p, config.levels, config.families));
        if (config.physical) {
            out.tables.push_back(dirac_physical_table(*config.physical, config.levels, config.families));
        }
        break;
    }
    case Mode::verify: {
        CheckTable checks;
        const bool dirac_given = config.physical ||
                                 (config.dimensionless && (config.dimensionless->d0 || config.dimensionless->mbar));
        const bool nr_given = config.physical || (config.dimensionless && !dirac_given);
        const bool defaults = !config.physical && !config.dimensionless;
        if (defaults || nr_given) {
            const auto p = resolve_nr(config);
            add_resolved("resolved_nr_", {{"a", p.a}, {"b", p.b}}, out);
            verify_nr(p, config, checks);
        }
        if (defaults || dirac_given) {
            const auto p = resolve_dirac(config);
            add_resolved("resolved_dirac_", {{"a", p.a}, {"b", p.b}, {"d0", p.d0}, {"mbar", p.mbar}}, out);
            verify_dirac(p, config, checks);
        }
        out.tables.push_back(checks.table());
        out.passed = checks.passed();
        break;
    }
    }
    return out;
}

void write_csv(const Output& out, std::ostream& os)
{
    for (const auto& [key, value] : out.meta) {
        os << "# " << key << ": " << render_csv_scalar(value) << '\n';
    }
    for (const auto& table : out.tables) {
        os << "# table: " << table.name << '\n';
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            os << (c ? "," : "") << table.columns[c].first;
        }
        os << '\n';
        const std::size_t rows = table.rows();
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < table.columns.size(); ++c) {
                os << (c ? "," : "") << csv_cell(table.columns[c].second, r);
            }
            os << '\n';
        }
    }
}

void write_json(const Output& out, std::ostream& os)
{
    os << "{\n  \"meta\": {\n";
    for (std::size_t i = 0; i < out.meta.size(); ++i) {
        os << "    " << nlohmann::json(out.meta[i].first).dump() << ": " << render_json_scalar(out.meta[i].second)
           << (i + 1 < out.meta.size() ? ",\n" : "\n");
    }
    os << "  },\n  \"data\": {\n";
    for (std::size_t t = 0; t < out.tables.size(); ++t) {
        const auto& table = out.tables[t];
        os << "    " << nlohmann::json(table.name).dump() << ": {\n";
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            os << "      " << nlohmann::json(table.columns[c].first).dump() << ": "
               << json_array(table.columns[c].second) << (c + 1 < table.columns.size() ? ",\n" : "\n");
        }
        os << "    }" << (t + 1 < out.tables.size() ? ",\n" : "\n");
    }
    os << "  }\n}\n";
}

void write(const Output& out, Format format, std::ostream& os)
{
    if (format == Format::csv) {
        write_csv(out, os);
    } else {
        write_json(out, os);
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Supersymmetric ladder hierarchies: spectra, eigenfunctions and verification"};
    app.set_version_flag("--version", std::string("susy-ladder 0.1.0"));

    std::string mode_name;
    app.add_option("mode", mode_name, "nr-spectrum | nr-eigenfunctions | dirac-spectrum | dirac-eigenfunctions | "
                                      "fig2 | fig3 | verify")
        ->required();

    Dimensionless dim;
    PhysicalParams phys;
    std::optional<double> hbar, m, c, e, k, pz, ell;
    auto* opts_dim = app.add_option_group("dimensionless");
    opts_dim->add_option("--a", dim.a, "centrifugal parameter a > 0");
    opts_dim->add_option("--b", dim.b, "Coulomb parameter b >= 0");
    opts_dim->add_option("--d0", dim.d0, "Dirac sigma3 coefficient");
    opts_dim->add_option("--mbar", dim.mbar, "reduced mass m c / hbar");
    auto* opts_phys = app.add_option_group("physical");
    opts_phys->add_option("--hbar", hbar);
    opts_phys->add_option("--m", m);
    opts_phys->add_option("--c", c);
    opts_phys->add_option("--e", e);
    opts_phys->add_option("--k", k);
    opts_phys->add_option("--pz", pz);
    opts_phys->add_option("--ell", ell);

    RunConfig config;
    std::string families = "a,c";
    std::string format = "csv";
    app.add_option("--levels", config.levels, "number of levels (>= 1)");
    app.add_option("--families", families, "comma separated subset of a,b,c,d");
    app.add_option("--grid-points", config.grid_points, "samples or oracle grid points");
    app.add_option("--rho-max", config.rho_max, "outer radius");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", config.out, "output path (default: standard output)");
    app.add_option("--tolerance", config.tolerance, "relative residual tolerance for verify");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& s) {
        return app.exit(s, out, err);
    } catch (const CLI::ParseError& pe) {
        app.exit(pe, out, err);
        return 2;
    }

    try {
        config.mode = mode_from_string(mode_name);
        config.format = format == "json" ? Format::json : Format::csv;
        config.families.clear();
        std::stringstream list(families);
        std::string item;
        while (std::getline(list, item, ',')) {
            if (item.size() != 1) {
                throw InvalidParameters("unknown family '" + item + "'");
            }
            const auto fam = dirac::family_from_char(item[0]);
            if (std::find(config.families.begin(), config.families.end(), fam) == config.families.end()) {
                config.families.push_back(fam);
            }
        }
        const bool any_dim = dim.a || dim.b || dim.d0 || dim.mbar;
        const bool any_phys = hbar || m || c || e || k || pz || ell;
        if (any_dim && any_phys) {
            throw InvalidParameters("give either dimensionless or physical parameters, not both");
        }
        if (any_dim) {
            config.dimensionless = dim;
        }
        if (any_phys) {
            phys.hbar = pick(hbar, phys.hbar);
            phys.m = pick(m, phys.m);
            phys.c = pick(c, phys.c);
            phys.e = pick(e, phys.e);
            phys.k = pick(k, phys.k);
            phys.pz = pick(pz, phys.pz);
            phys.ell = pick(ell, phys.ell);
            config.physical = phys;
        }

        const Output result = run(config);
        if (config.out.empty()) {
            write(result, config.format, out);
        } else {
            std::ofstream file(config.out, std::ios::binary);
            if (!file) {
                throw InvalidParameters("cannot open output file " + config.out);
            }
            write(result, config.format, file);
        }
        if (!result.passed) {
            err << "verification failed\n";
            return 3;
        }
        return 0;
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return 2;
    }
}

} // namespace susy::cli
