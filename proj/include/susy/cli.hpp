#pragma once

/// \file cli.hpp
///
/// Configuration, table building and serialization behind the `susy-ladder` tool.
/// Everything here is deterministic: equal configs give byte-identical output.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "susy/dirac.hpp"
#include "susy/params.hpp"

namespace susy::cli {

enum class Mode { nr_spectrum, nr_eigenfunctions, dirac_spectrum, dirac_eigenfunctions, fig2, fig3, verify };
enum class Format { csv, json };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

/// Dimensionless inputs. d0 and mbar only matter for Dirac modes.
struct Dimensionless {
    std::optional<double> a;
    std::optional<double> b;
    std::optional<double> d0;
    std::optional<double> mbar;
};

struct RunConfig {
    Mode mode = Mode::verify;
    /// At most one of the two styles is set; neither means the mode defaults.
    std::optional<Dimensionless> dimensionless;
    std::optional<PhysicalParams> physical;
    int levels = 3;
    std::vector<dirac::Family> families{dirac::Family::a, dirac::Family::c};
    std::optional<int> grid_points;
    std::optional<double> rho_max;
    Format format = Format::csv;
    std::string out; ///< empty: standard output
    double tolerance = 1e-7;

    /// Throws InvalidParameters for levels < 1, non-positive grid sizes and similar.
    void validate() const;
};

using Scalar = std::variant<double, long long, std::string>;
using Column = std::variant<std::vector<double>, std::vector<long long>, std::vector<std::string>>;

struct Table {
    std::string name;
    std::vector<std::pair<std::string, Column>> columns;

    std::size_t rows() const;
};

struct Output {
    /// Full config echo in a fixed key order.
    std::vector<std::pair<std::string, Scalar>> meta;
    std::vector<Table> tables;
    /// False when a verify check failed.
    bool passed = true;
};

/// Fixed 17-significant-digit scientific rendering used for every real value.
std::string format_real(double value);

/// Builds all tables for the config. Throws susy::Error subclasses for invalid input.
Output run(const RunConfig& config);

void write_csv(const Output& out, std::ostream& os);
void write_json(const Output& out, std::ostream& os);
void write(const Output& out, Format format, std::ostream& os);

/// Entry point used by the executable: parses argv, runs, writes, and returns the
/// exit status (0 ok, 2 invalid config, 3 failed verification).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace susy::cli
