#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pcl/conic.hpp"
#include "pcl/report.hpp"

namespace pcl {

using Vec2 = std::array<double, 2>;

/// Axis-aligned ellipse x^2/a^2 + y^2/b^2 = 1 (a = b is a circle).
struct Ellipse {
  double a = 1.0;
  double b = 1.0;

  Vec2 point(double phi) const;
  /// Counterclockwise unit tangent at point(phi).
  Vec2 tangent(double phi) const;
  /// Tangent line at point(phi) as homogeneous coordinates.
  Vec3<double> tangent_line(double phi) const;
  /// Value of x^2/a^2 + y^2/b^2 - 1.
  double eval(const Vec2& p) const;
};

/// Confocal family x^2/(a1^2 + lambda) + y^2/(a2^2 + lambda) = 1 with base
/// member lambda = 0. Ellipses for lambda > -a2^2, hyperbolas for
/// -a1^2 < lambda < -a2^2.
struct ConfocalFamily {
  double a1 = 2.0;
  double a2 = 1.0;

  ConfocalFamily() = default;
  ConfocalFamily(double a1_, double a2_);

  Ellipse member(double lambda) const;
  Ellipse base() const { return member(0.0); }
  /// Squared focal distance a1^2 - a2^2.
  double focal2() const { return a1 * a1 - a2 * a2; }
  /// Parameters of the two members through p: {hyperbola, ellipse}. On the
  /// major axis outside the foci the hyperbola is the degenerate -a2^2.
  std::array<double, 2> lambdas_through(const Vec2& p) const;
  double hyperbola_through(const Vec2& p) const { return lambdas_through(p)[0]; }
  double ellipse_through(const Vec2& p) const { return lambdas_through(p)[1]; }
  /// Cleared-denominator membership residual of p on member(lambda), scaled
  /// by a1^4; finite on the degenerate members.
  double membership(const Vec2& p, double lambda) const;
};

/// Oriented line through p with unit direction d.
struct Ray {
  Vec2 p;
  Vec2 d;
};

/// Reflect a ray in the ellipse at its forward intersection point.
Ray billiard_reflect(const Ray& ray, const Ellipse& table);

/// Distance-type residual of the support line of ray being tangent to e.
double tangency_residual(const Ray& ray, const Ellipse& e);

/// Parameter phi of the tangency point of a ray tangent to e.
double tangency_parameter(const Ray& ray, const Ellipse& e);

/// One billiard step on tangency parameters of the caustic: forward tangent
/// at phi, reflect in the table, new tangency parameter lifted above phi.
double caustic_step(double phi, const Ellipse& caustic, const Ellipse& table);
double caustic_step(double phi, double lambda, const ConfocalFamily& family);

/// Rotation number of caustic_step by a smoothly weighted Birkhoff average of
/// the lifted displacement.
double rotation_number(const Ellipse& caustic, const Ellipse& table, std::size_t iterations = 20000,
                       double phi0 = 0.0);
double rotation_number(double lambda, const ConfocalFamily& family, std::size_t iterations = 20000);

/// Lifted phi_n - phi_0 - 2 pi after n steps from phi0.
double closure_error(const Ellipse& caustic, const Ellipse& table, int n, double phi0);

struct CausticSolution {
  double lambda = 0.0;
  double rho = 0.0;
  double closure = 0.0;  // |closure_error| from phi0 = 0
};

/// Caustic member whose billiard orbits close after n steps (n >= 3 odd).
CausticSolution find_caustic_for_n(const ConfocalFamily& family, int n);

struct GridPoint {
  int i = 0;  // i <= j; i == j is the tangency point of side i
  int j = 0;
  Vec3<double> p;
};

struct PonceletGrid {
  ConfocalFamily family;
  double lambda = 0.0;
  int n = 0;
  std::vector<double> phi;             // increasing tangency parameters
  std::vector<Vec3<double>> lines;     // side L_i tangent at phi[i]
  std::vector<GridPoint> points;       // n(n+1)/2 points

  Vec3<double> at(int i, int j) const;
  /// P_k: L_i meet L_{i+k} for i = 0..n-1 (P_0 are the tangency points).
  std::vector<Vec3<double>> concentric(int k) const;
  /// Q_k: L_i meet L_j with i + j = k mod n, i <= j, ordered by i.
  std::vector<Vec3<double>> radial(int k) const;
};

PonceletGrid poncelet_grid(const ConfocalFamily& family, int n, double phi0 = 0.0);

enum class ConicKind { Ellipse, Hyperbola, Parabola, Degenerate };
std::string_view to_string(ConicKind k);

/// Real conic classified by its affine part.
ConicKind classify(const Conic<double>& c);

/// |p^T C p| for unit C and unit p.
double conic_residual(const Conic<double>& c, const Vec3<double>& p);

struct SetFit {
  std::string name;            // "P2", "Q7"
  std::size_t size = 0;
  bool fitted = false;         // five-point fit done (size >= 5)
  ConicKind kind = ConicKind::Degenerate;
  double conic_residual = 0.0;     // rest of the set on the fitted conic
  double confocal_lambda = 0.0;    // confocal member through the first point
  double confocal_residual = 0.0;  // the rest on that member
};

struct GridReport {
  std::vector<SetFit> concentric;
  std::vector<SetFit> radial;
  double max_conic_residual = 0.0;
  double max_confocal_residual = 0.0;
  /// Concentric sets matched through the Ivory diagonal map.
  double ivory_equivalence_residual = 0.0;
  /// Same pairs through find_equivalence collineations.
  double collineation_equivalence_residual = 0.0;
  bool all_equivalent = true;
  bool kinds_ok = true;
};

GridReport grid_report(const PonceletGrid& grid, double eps = 1e-6);

/// Positive diagonal map sending member(from) onto member(to).
Matrix3<double> ivory_map(const ConfocalFamily& family, double from, double to);

struct IvoryResult {
  double max_residual = 0.0;
  std::vector<double> residuals;
};

/// Points P = member(gamma).point(t): residual of the Ivory image of P on the
/// confocal hyperbola through P.
IvoryResult ivory_check(const ConfocalFamily& family, double gamma, double big, const std::vector<double>& params);
IvoryResult ivory_check(const ConfocalFamily& family, double gamma, double big, std::size_t samples, Rng& rng);

struct ReyeChaslesResult {
  Vec2 a, b, c, d;
  double hyperbola_residual = 0.0;  // D on the confocal hyperbola through C
  double pitot_residual = 0.0;      // |AD| - |AC| + |BC| - |BD|
};

/// Tangent pairs from A and B to member(inner); C, D are the other two
/// meets. The tangency points must interleave within a half-turn, so that
/// D is on the near side; A and B may be swapped in the result.
ReyeChaslesResult reye_chasles_check(const ConfocalFamily& family, const Vec2& a, const Vec2& b, double inner);

/// Circle-valued coordinate on a caustic in which caustic_step for every
/// confocal table is a rotation, built from one orbit.
class CanonicalCoordinate {
 public:
  CanonicalCoordinate(const Ellipse& caustic, const Ellipse& table, std::size_t grid_size = 100000,
                      double phi0 = 0.0);

  /// x(phi) in [0, 1), with x(phi0) = 0.
  double operator()(double phi) const;
  double rho() const { return rho_; }
  const Ellipse& caustic() const { return caustic_; }

  /// Tangency coordinates (x1, x2) of the tangents from an outside point,
  /// x1 at the clockwise tangency point.
  std::array<double, 2> string_coordinates(const Vec2& p) const;

  /// Max circular deviation of x(step(phi)) - x(phi) over the table for a
  /// second table.
  double shift_constancy(const Ellipse& other_table, std::size_t samples = 2000) const;

 private:
  Ellipse caustic_;
  double rho_ = 0.0;
  std::vector<double> phi_;  // sorted in [phi0, phi0 + 2 pi)
  std::vector<double> x_;    // nondecreasing lift of x
  double phi0_ = 0.0;
};

CanonicalCoordinate canonical_coordinate(double lambda, const ConfocalFamily& family,
                                         std::size_t grid_size = 100000);

/// Circular distance on R/Z.
double circle_distance(double x, double y);

struct CommonTangents {
  std::array<Vec3<Complex>, 4> lines;  // (u, v, -1): u x + v y = 1
  double residual = 0.0;               // on the dual conic of the third member
  double min_imag = 0.0;               // smallest imaginary size of a tangent
};

CommonTangents confocal_common_tangents(const ConfocalFamily& family, double l1, double l2, double l3);

/// Deviation of step_T1 o step_T2 from step_T2 o step_T1 at phi.
double commutation_residual(const Ellipse& caustic, const Ellipse& t1, const Ellipse& t2, double phi);

struct NestedNormalization {
  Matrix3<double> map;  // points of the input plane to the confocal plane
  ConfocalFamily family;
  double inner = 0.0;   // lambda of the image of the inner ellipse
  double residual = 0.0;
};

/// Projective map taking a nested pair of ellipses to a confocal pair with
/// the outer one as base member.
NestedNormalization normalize_nested_pair(const Conic<double>& inner, const Conic<double>& outer);

/// Every check of the billiard section on one family and period.
struct PonceletSuite {
  ConfocalFamily family;
  int n = 0;
  CausticSolution caustic;
  double rho_error = 0.0;
  double porism_closure = 0.0;  // worst of 10 random starting points
  GridReport grid;
  double ivory = 0.0;
  double reye_chasles_hyperbola = 0.0;
  double reye_chasles_pitot = 0.0;
  double common_tangents = 0.0;
  double commutation = 0.0;
  double shift_constancy = 0.0;
  double hyperbola_sum = 0.0;       // x1 + x2 along a confocal hyperbola
  double ellipse_difference = 0.0;  // x2 - x1 along a confocal ellipse
  double string_spacing = 0.0;      // grid tangency coordinates versus k/n

  bool passed() const;
};

PonceletSuite run_poncelet_suite(const ConfocalFamily& family, int n, std::uint64_t seed, std::size_t samples = 50);

/// Suite as a report: one trial per check, residuals against its tolerance.
VerificationReport poncelet_report(const PonceletSuite& suite, std::uint64_t seed);

}  // namespace pcl
