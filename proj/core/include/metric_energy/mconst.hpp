#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metric_energy/energy.hpp"
#include "metric_energy/negtype.hpp"
#include "metric_energy/numkernel.hpp"
#include "metric_energy/spaces.hpp"

namespace metric_energy {

enum class MStatus { InfiniteNotQhm, InfiniteConstantPotential, Finite };

std::string_view to_string(MStatus status);

/// Outcome of computing M(X) = sup { I(mu) : mu(X) = 1 }.
///
/// Finite: `value`, `maximizer` (mass one, constant potential) and `lambda`
/// (that constant). InfiniteNotQhm: `witness` is a unit mass-zero measure
/// with positive energy. InfiniteConstantPotential: `witness` is a unit
/// mass-zero measure of zero energy whose potential is the nonzero constant
/// `witness_constant`.
struct MResult {
  MStatus status = MStatus::Finite;
  std::optional<double> value;
  std::optional<DiscreteSignedMeasure> maximizer;
  std::optional<double> lambda;
  std::optional<DiscreteSignedMeasure> witness;
  std::optional<double> witness_constant;

  // diagnostics
  double zero_threshold = 0.0;
  double pinv_residual = 0.0;
  Eigen::Index f_dim = 0;
  std::shared_ptr<const NegativeTypeReport> classification;

  bool is_finite() const { return status == MStatus::Finite; }
};

MResult compute_M(const MetricSpace& space, const ToleranceConfig& tol = {});
MResult compute_M(const MetricSpace& space, std::shared_ptr<const NegativeTypeReport> report);

struct MPlusResult {
  double value = 0.0;
  Eigen::VectorXd weights;  // probability weights attaining `value`
  double gap = 0.0;         // final Frank-Wolfe duality gap
  int iterations = 0;
};

/// M+(X): maximises w^T D w over the probability simplex by Frank-Wolfe
/// ascent with away steps and exact line search, starting from uniform
/// weights. Stops once the gap is <= gap_tolerance or after max_iters, then
/// refines the weights by an exact stationarity solve on the active support.
MPlusResult compute_M_plus(const MetricSpace& space, int max_iters = 200000,
                           double gap_tolerance = 1e-9);

struct OperatorConstants {
  double k = 0.0;       // max_x sup_nu |d_nu(x)| / |nu|
  Eigen::Index k_argmax = 0;
  double c_t = 0.0;     // |d_nu|_inf <= c_t |nu| on E_0(X); equals k
  double c_lip = 0.0;   // sampled Lipschitz ratio of I on probability measures
  double c_potential = 0.0;  // |d_mu|_inf <= c_potential |mu|_E, equal to M + 1 + sqrt(M + 1)
  int lip_samples = 0;
};

/// Throws Error(NotFinite) unless `m` is Finite.
OperatorConstants operator_constants(const MetricSpace& space, const MResult& m,
                                     std::uint64_t seed = 0, int lip_samples = 2000);

struct WitnessStep {
  int n = 0;
  DiscreteSignedMeasure measure;
  double energy = 0.0;
  double predicted = 0.0;  // closed form of the growth law
};

/// Mass-one measures whose energies grow without bound, certifying M = oo.
/// InfiniteNotQhm: mu_n = n w + delta_x, energy n^2 I(w) + 2 n d_w(x).
/// InfiniteConstantPotential: with w = a (mu_1 - mu_2) (Hahn-Jordan) and
/// d_{mu_1 - mu_2} = K, nu_n = n sign(K) (mu_1 - mu_2) + mu_2 with energy
/// 2 n |K| + I(mu_2). Throws Error(WrongStatus) on a Finite result.
std::vector<WitnessStep> divergence_witness(const MetricSpace& space, const MResult& m, int steps);

struct MaximizerCertificate {
  bool is_stationary = false;
  bool is_global = false;
  double lambda = 0.0;              // mean potential value
  double potential_deviation = 0.0; // max |d_mu(x) - lambda|
  double stationarity_tolerance = 0.0;
  double mass_error = 0.0;
};

/// Constant potential plus negative semidefiniteness on mass zero makes a
/// mass-one measure a global maximiser of I. Throws Error(NotMassOne).
MaximizerCertificate certify_maximizer(const DiscreteSignedMeasure& candidate,
                                       const ToleranceConfig& tol = {});
MaximizerCertificate certify_maximizer(const DiscreteSignedMeasure& candidate,
                                       const NegativeTypeReport& report);

struct StrengthenedQhmReport {
  int samples = 0;
  int informative_samples = 0;  // pairs with I(mu_1) != I(mu_2)
  /// inf over pairs of -I(mu_1 - mu_2) / |I(mu_1) - I(mu_2)|^{1/2}: the
  /// largest L for which I(mu_1 - mu_2) + L |dI|^{1/2} <= 0 held on every pair.
  double l_sqrt_infimum = 0.0;
  /// Same infimum for the squared form -I(mu_1 - mu_2) / dI^2; the Lipschitz
  /// bound predicts it is >= 1 / c_lip^2.
  double l_squared_infimum = 0.0;
  double c_lip = 0.0;
  /// max over pairs of I(mu_1 - mu_2) + dI^2 / c_lip^2 (should be <= 0).
  double squared_form_worst = 0.0;
  bool squared_form_holds = false;
};

StrengthenedQhmReport strengthened_qhm_check(const MetricSpace& space, const MResult& m,
                                             std::uint64_t seed, int trials,
                                             std::optional<OperatorConstants> constants = std::nullopt);

}  // namespace metric_energy
