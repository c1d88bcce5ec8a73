#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace steinshape {

/// Radius description as read from a config file, before validation.
struct DomainSpec {
  int dimension = 2;
  double base_radius = 1.0;
  std::vector<double> fourier_cos;  // a_1..a_K
  std::vector<double> fourier_sin;  // b_1..b_K
  bool normalize_volume = false;
  bool recenter = false;
  std::string label;
};

/// R, R' and R'' at one angle.
struct RadiusJet {
  double r = 0.0;
  double dr = 0.0;
  double ddr = 0.0;
};

/// Planar domain {r < R(theta)} with
///   R(theta) = base + sum_k a_k cos(k theta) + b_k sin(k theta).
/// Construction does not validate; use build_domain for checked input.
class StarDomain {
 public:
  StarDomain() = default;
  StarDomain(double base_radius, std::vector<double> a, std::vector<double> b, std::string label = {});

  static StarDomain ball(double radius = 1.0) { return StarDomain(radius, {}, {}, "ball"); }
  /// base + eps cos(k theta)
  static StarDomain cosine_mode(int k, double eps, double base = 1.0);

  int dimension() const { return 2; }
  int order() const { return static_cast<int>(a_.size()); }
  double base_radius() const { return base_; }
  const std::vector<double>& cos_coeffs() const { return a_; }
  const std::vector<double>& sin_coeffs() const { return b_; }
  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  double radius(double theta) const;
  RadiusJet jet(double theta) const;

  Eigen::Vector2d boundary_point(double theta) const;
  /// Outward unit normal at the boundary point of angle theta.
  Eigen::Vector2d normal(double theta) const;
  /// Arc-length Jacobian sqrt(R^2 + R'^2).
  double jacobian(double theta) const;
  /// Signed curvature (R^2 + 2R'^2 - R R'') / (R^2 + R'^2)^(3/2).
  double curvature(double theta) const;

  /// Domain rotated by phi: R_new(theta) = R(theta - phi).
  StarDomain rotated(double phi) const;
  /// Domain dilated by s: R_new = s R.
  StarDomain scaled(double s) const;
  /// True when all Fourier coefficients vanish.
  bool is_ball() const;

 private:
  double base_ = 1.0;
  std::vector<double> a_;
  std::vector<double> b_;
  std::string label_;
};

inline constexpr int kCheckGrid = 4096;

/// Validates positivity and star-shapedness on a kCheckGrid-point grid.
/// Throws NonPositiveRadius / NotStarShaped / InputError.
StarDomain build_domain(const DomainSpec& spec);
void validate_domain(const StarDomain& domain);

/// Angles in [0, 2 pi) where R' changes sign, refined by bisection.
std::vector<double> radius_critical_angles(const StarDomain& domain);

struct BoundaryFrame {
  std::vector<double> theta;
  std::vector<double> r;
  std::vector<double> dr;
  std::vector<Eigen::Vector2d> points;
  std::vector<Eigen::Vector2d> normals;
  /// Normal of the boundary point on the ray theta, viewed as a field on the unit circle.
  std::vector<Eigen::Vector2d> transported_normals;
  std::vector<double> jacobian;
  std::vector<double> curvature;

  int size() const { return static_cast<int>(theta.size()); }
  /// Trapezoid weight 2*pi/M (uniform grid).
  double dtheta() const;
};

BoundaryFrame boundary_frame(const StarDomain& domain, int m);

/// psi(p) = R(p/|p|) p, psi(0) = 0.
Eigen::Vector2d bulk_map(const StarDomain& domain, const Eigen::Vector2d& p);
/// psi^{-1}(x) = x / R(x/|x|).
Eigen::Vector2d bulk_map_inverse(const StarDomain& domain, const Eigen::Vector2d& x);
/// D psi(p) = R I + R' rhat thetahat^T. At p = 0 the theta = 0 limit is used.
Eigen::Matrix2d bulk_map_jacobian(const StarDomain& domain, const Eigen::Vector2d& p);

struct RegularityParams {
  double kappa = 1.0;
  double alpha = 1.0;
  double lambda_est = 0.0;
  bool convex = true;
};

/// Throws GridTooCoarse if m < 64, InputError if alpha outside (0, 1].
RegularityParams regularity_params(const StarDomain& domain, double alpha, int m = 1024);

/// min over an m-point grid of nu . x/|x| = R / sqrt(R^2 + R'^2).
double star_kappa(const StarDomain& domain, int m = kCheckGrid);

struct GeometricFunctionals {
  double volume = 0.0;
  double perimeter = 0.0;
  double momentum = 0.0;  // boundary integral of |x|^2
  Eigen::Vector2d barycenter = Eigen::Vector2d::Zero();
  double deficit_perimeter = 0.0;  // |dOmega| - |dB_1|
  double deficit_momentum = 0.0;   // M - |dB_1|
  int grid_size = 0;
};

/// Periodic trapezoid quadrature, doubled until 1e-12 relative agreement.
/// Throws NoConvergence past 2^16 points.
GeometricFunctionals geometric_functionals(const StarDomain& domain);

enum class NormalizeMode { Volume, Recenter };

/// Volume: rescale so |Omega| = |B_1|. Recenter: translate so the boundary
/// barycenter is 0 and refit R about the new origin. Throws RecenterFailed.
StarDomain normalize(const StarDomain& domain, NormalizeMode mode);

/// Applies the flags of a spec: recenter first, then volume.
StarDomain apply_normalization(const StarDomain& domain, bool recenter, bool volume);

/// sup|h| + sup_{x != y} |h(x) - h(y)| / |x - y|^alpha over the given points.
double holder_norm(const std::vector<double>& values, const std::vector<Eigen::Vector2d>& points,
                   double alpha);
/// Matrix-valued variant with the Frobenius norm.
double holder_norm(const std::vector<Eigen::Matrix2d>& values, const std::vector<Eigen::Vector2d>& points,
                   double alpha);

}  // namespace steinshape
