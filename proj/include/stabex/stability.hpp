#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stabex/limits.hpp"

namespace stabex {

enum class StabilityKind { Kernel, Cokernel };

/// Outcome of a bounded semi-stability certification. `certified` means:
/// every pullback of the subject along an in-class morphism within the bound
/// exists and the pulled-back morphism is again a cokernel (dually for
/// kernels). A refutation carries the first failing witness in enumeration
/// order, making outputs reproducible byte for byte.
struct SemiStableVerdict {
  StabilityKind kind = StabilityKind::Cokernel;
  Mor subject;
  bool certified = false;
  int bound = 0;
  std::string class_name;
  std::optional<Mor> witness;  // failing h (resp. f) when refuted
  std::string failure;         // "PullbackMissing" | "NotACokernel" | "PushoutMissing" | "NotAKernel"
};

/// Optional memo shared across a sweep: exact verdicts per morphism key and
/// certified flags per isomorphism-class key (sound because semi-stability
/// is isomorphism-invariant; refuted entries are recomputed exactly so the
/// witness always belongs to the queried subject).
struct StabilityContext {
  std::map<std::string, SemiStableVerdict> exact;
  std::map<std::string, bool> iso_certified;
};

SemiStableVerdict certify_semistable_cokernel(const Mor& d, const ObjectClass& cls, int bound,
                                              StabilityContext* ctx = nullptr);
SemiStableVerdict certify_semistable_kernel(const Mor& i, const ObjectClass& cls, int bound,
                                            StabilityContext* ctx = nullptr);

/// Objects within bound belonging to the class, honoring its iso-dedup flag.
std::vector<Obj> objects_in_class(const Category& cat, const ObjectClass& cls, int bound);

/// Bounded weak idempotent completeness: every retraction within the bound
/// has a representable kernel. Memoized per category and bound.
bool weakly_idempotent_complete(const Category& cat, int bound);

/// Composition of certified semi-stable cokernels (requires cod(d) in the
/// class). Returns the verdict for p.d, the constructed kernel of p.d, and
/// the per-witness two-step pullback factorizations from the proof.
struct ComposeStep {
  Mor gamma;             // witness G -> D with G in class
  PullbackSquare outer;  // pullback of p along gamma
  PullbackSquare inner;  // pullback of d along the outer C-leg
  Mor alpha;             // inner B-leg: apex -> B
  Mor vu;                // composed G-leg: apex -> G
};
struct ComposeResult {
  SemiStableVerdict verdict;  // for p.d
  Mor kernel_of_composite;    // g with g = ker(p.d)
  std::vector<ComposeStep> steps;
};
ComposeResult compose_semistable(const Mor& d, const Mor& p, const ObjectClass& cls, int bound,
                                 StabilityContext* ctx = nullptr);

/// Direct sum d (+) d' via the two diagonal factors and compose_semistable
/// (requires dom(d') and cod(d) in the class).
ComposeResult direct_sum_semistable(const Mor& d, const Mor& dp, const ObjectClass& cls, int bound,
                                    StabilityContext* ctx = nullptr);

/// Replayable record of the cancellation construction: given d: B -> C and
/// p: C -> D with p.d a certified semi-stable cokernel (and B, C in class),
/// p is itself one. Every recorded equation is checked on construction.
struct ObscureStep {
  Mor c;               // witness G -> D
  PullbackSquare ysq;  // pullback of [p 0]: C (+) B -> D along c
  Mor alpha_p, beta_p, gamma;  // components of the Y-legs
  Mor delta;           // unique mediator for the cone ([0;1], 0); beta'.delta = 1
  Mor ker_incl;        // i: K -> Y, kernel of the retraction beta'
  Mor leg_c, leg_g;    // alpha'.i and gamma.i: the assembled pullback of (p, c)
};
struct ObscureTrace {
  Mor h;                    // kernel inclusion of p
  Mor g;                    // kernel inclusion of p.d
  Mor dh;                   // [d h]: B (+) C' -> C
  bool dh_square_pullback;  // ([1 0], [d h]) is a pullback of (p.d, p)
  bool dh_is_cokernel;
  bool p_is_coker_of_h;
  Mor p0;                   // [p 0]: C (+) B -> D
  std::vector<Mor> chain;   // four factors whose composite is [p 0]
  bool chain_composes;
  bool routed_via_karoubi = false;
  std::vector<ObscureStep> steps;
};
struct ObscureResult {
  SemiStableVerdict verdict;  // for p
  ObscureTrace trace;
};
ObscureResult obscure_cokernel(const Mor& d, const Mor& p, const ObjectClass& cls, int bound,
                               StabilityContext* ctx = nullptr);

/// Idempotent-completion route for the same statement, used automatically
/// when the instance is not weakly idempotent complete and available
/// directly for cross-checks. Implemented by the completion machinery.
ObscureResult obscure_via_karoubi(const Mor& d, const Mor& p, const ObjectClass& cls, int bound);

/// Kernel-cokernel pair certification with the absolute class.
struct StableSesCert {
  Mor i, d;
  SemiStableVerdict kernel_verdict, cokernel_verdict;
  bool stable = false;
};
StableSesCert certify_stable_ses(const Mor& i, const Mor& d, int bound,
                                 StabilityContext* ctx = nullptr);

/// One classification record per kernel-cokernel pair found in the sweep.
struct ClassifyRecord {
  Mor i, d;
  bool stable = false;
  SemiStableVerdict kernel_verdict, cokernel_verdict;
};

/// Enumerate all kernel-cokernel pairs (ker d, d) within bound (optionally
/// one representative per isomorphism class of d) and certify each.
std::vector<ClassifyRecord> classify_sweep(const Category& cat, int bound, bool dedup_iso,
                                           StabilityContext* ctx = nullptr);

}  // namespace stabex
