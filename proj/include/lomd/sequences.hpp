#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lomd {

enum class RecursionMode {
  /// a_{t+1} = (1 - q/s^eta) a_t + q'/s^(2 eta), s = t + t0.
  Linear,
  /// a_{t+1} = a_t - (q/s^eta) a_t^(1+alpha) + q'/s^(2 eta).
  Power,
  /// a_{t+1} = a_t - (q/s^eta) a_t^(1+alpha). eta = 0 gives a constant step.
  PureDecay,
};

struct RecursionSpec {
  RecursionMode mode = RecursionMode::Power;
  double q = 1.0;
  double q_prime = 1.0;
  double eta = 1.0;
  double t0 = 0.0;
  double alpha = 1.0;
  double a1 = 1.0;

  std::string describe() const;
};

struct RecursionPath {
  /// values[t - 1] = a_t for t = 1..T.
  std::vector<double> values;
  /// Steps where the recursion went negative and was clamped to 0.
  std::size_t clamped = 0;
};

/// The recursion taken with equality, clamped at 0 from below. Requires T >= 2.
RecursionPath iterate_equality_recursion(const RecursionSpec& spec, std::uint64_t T);

/// Phase-transition constant:
///   (1 - eta) / (1 + alpha)^(1 + 1/alpha)                       if eta <= (1+alpha)/(1+2 alpha),
///   alpha ((1 - 2^-(1+alpha)) / (1 + alpha))^(1 + 1/alpha)      otherwise.
/// Throws DomainError unless eta in (1/2, 1] and alpha > 0.
double c_const(double eta, double alpha);

/// Constant the large-eta sequence lemma actually needs:
/// alpha ((1 - 2^(1 - 2 eta)) / (1 + alpha))^(1 + 1/alpha). Never larger than c_const.
double c_const_large_eta_proof(double eta, double alpha);

enum class LemmaId { ChungA1, ChungA4, PolyakA3, A5, A6 };

/// Where the stated and proved versions of a lemma disagree, Proof uses the
/// hypotheses and bound that the argument establishes; Statement uses the
/// printed ones. The two forms coincide for the Chung and Polyak lemmas.
enum class BoundForm { Proof, Statement };

std::string lemma_name(LemmaId id);

/// Closed-form bound at every t = 1..T. Throws PreconditionError naming the
/// violated hypothesis.
std::vector<double> lemma_bound_curve(LemmaId id, const RecursionSpec& spec, std::uint64_t T,
                                      BoundForm form = BoundForm::Proof);

inline constexpr double kLemmaMarginTolerance = 1e-12;

struct LemmaReport {
  LemmaId lemma = LemmaId::ChungA1;
  bool pass = false;
  /// min over t of bound_t - a_t.
  double worst_margin = 0.0;
  std::uint64_t worst_step = 0;
  std::size_t clamped = 0;
};

/// Passes iff a_t <= bound_t + kLemmaMarginTolerance for all t <= T.
LemmaReport verify_lemma_bound(LemmaId id, const RecursionSpec& spec, std::uint64_t T,
                               BoundForm form = BoundForm::Proof);

/// Deterministic random parameter draws satisfying the lemma's hypotheses.
std::vector<RecursionSpec> random_hypothesis_draws(LemmaId id, std::size_t count, std::uint64_t seed);

}  // namespace lomd
