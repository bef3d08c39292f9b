#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "blockess/analysis.hpp"
#include "blockess/corrmodel.hpp"

namespace blockess {

// Textual model and blocking specifications used by the command line tool.
//
//   ar1:rho=R   linear:rho=R   invlin:rho=R   ar1pos:rho=R,positions=FILE
//   matern-l1:rho=R   matern-l2-0.5:rho=R   matern-l2-1.5:rho=R
//   kron:(SPEC)x(SPEC)
//
//   rw:m=M  cw:m=M  mcw:m=M  prw:g=G  rw2d:m1=A,m2=B  cw2d:m1=A,m2=B
//   custom:file=PATH

/// A model spec with a fixed rho.
CorrelationModel parse_model(std::string_view spec);

/// A model spec whose rho is supplied later by a grid. The spec must not
/// carry rho itself. For `linear` the grid value is (n-1) rho.
ModelFamily parse_family(std::string_view spec);

BlockingSpec parse_blocking(std::string_view spec);

/// The positions list named by an `ar1pos` spec, if the spec is one.
std::optional<std::vector<double>> spec_positions(std::string_view spec);

/// One floating-point value per line; blank lines are skipped.
std::vector<double> read_values_file(const std::string& path);

/// Parses "a:b:step" into a grid.
RhoGrid parse_rho_grid(std::string_view text);

/// %.17g, or fixed with `digits` decimals when given.
std::string format_number(double value, std::optional<int> digits = std::nullopt);

inline constexpr const char* kSweepCsvHeader =
    "model,rho,n,n1,n2,b,m,b1,m1,b2,m2,blocking,ess_full,ess_block,eff";

/// Writes the header and one line per row, quoting fields per RFC 4180.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     std::optional<int> digits = std::nullopt);

}  // namespace blockess
