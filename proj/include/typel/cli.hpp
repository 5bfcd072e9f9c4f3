#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "typel/constructions.hpp"
#include "typel/errors.hpp"
#include "typel/group.hpp"
#include "typel/limit_dynamics.hpp"

namespace typel::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kInputError = 2,
  kIoError = 3,
  kBudgetExceeded = 4,
};

/// Malformed configuration or command input. The message carries a
/// line/column position for syntax errors and a JSON path for semantic ones.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Complex literal: "1.5", "-2i", "0.3+1.2i", "1e-3-4i", "i".
Complex parse_complex(std::string_view text);

/// Group built from a preset string or a JSON config, plus the Mobius
/// generators when the group is a representation of a PSL_2 group.
struct LoadedGroup {
  GroupSpec spec;
  std::string description;
  enum class Kind { Matrices, TwistedCubic, Segre, Schottky, Cone, Klein } kind = Kind::Matrices;
  std::vector<Mobius> mobius;
  /// Real 3 x 2(2n+2) chart projection matrix, if overridden.
  std::optional<Eigen::MatrixXd> projection;
  /// Points listed in the config, for the ford command.
  std::vector<CVector> points;
};

/// Presets:
///   twisted-cubic:<mobius-group>   segre:<mobius-group>
///   schottky:<a1,a2,...>;<b1,b2,...>   (diagonals of A and B)
///   cone:<alpha>,<p>,<q>,<r>
///   klein:<preset>|<preset>|<r>
/// where <mobius-group> is classical-schottky, classical-schottky(<k>), or
/// a ';'-separated list of "a,b,c,d" Mobius coefficients.
LoadedGroup load_preset(std::string_view preset);

/// Parses a JSON group config. source names the input in messages.
LoadedGroup parse_config(std::string_view text, const std::string& source = "config");
LoadedGroup load_config_file(const std::string& path);

struct ProjectedPoint {
  double x = 0.0, y = 0.0, z = 0.0;
  bool finite = true;
};

/// Chart z_{2n+1} = 1, then the projection matrix (default: real parts of
/// the first three coordinates) applied to the interleaved real vector
/// (Re y0, Im y0, Re y1, ...). Points at infinity of the chart are not finite.
ProjectedPoint project_point(const CVector& z, const std::optional<Eigen::MatrixXd>& projection);

std::string format_double(double v, int digits = 17);

/// CSV: word_length, z0_re, z0_im, ..., proj_x, proj_y, proj_z.
std::string cloud_to_csv(const LimitCloud& cloud, const std::optional<Eigen::MatrixXd>& projection);
/// ASCII PLY with one vertex per finite projected point.
std::string cloud_to_ply(const LimitCloud& cloud, const std::optional<Eigen::MatrixXd>& projection);

struct CloudRow {
  int word_length = 0;
  double x = 0.0, y = 0.0;
  bool finite = true;
};
/// Reads the projection columns of a cloud CSV. Throws ConfigError.
std::vector<CloudRow> parse_cloud_csv(std::string_view text);
/// Scatter of (proj_x, proj_y) colored by word length, with a legend.
std::string cloud_svg(const std::vector<CloudRow>& rows);

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace typel::cli
