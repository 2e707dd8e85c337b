#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stabex/stability.hpp"

namespace stabex {

/// A kernel-cokernel pair: i is a kernel of d and d is a cokernel of i.
/// Construct through make_ses, which certifies both halves with the oracle.
struct ShortExactSeq {
  Mor i;  // inclusion A -> B
  Mor d;  // projection B -> C
};

/// Validates the pair within bound; throws std::invalid_argument otherwise.
ShortExactSeq make_ses(const Mor& i, const Mor& d, int bound);

/// The sequence ker(d) -> d for a cokernel d, when the kernel is
/// representable. Nullopt when d is not a cokernel or the kernel is missing.
std::optional<ShortExactSeq> ses_of_deflation(const Mor& d, int bound);

/// A named, deterministic, replayable class of short exact sequences.
/// Membership procedures must be safe to call from several threads.
struct ConflationClass {
  std::string name;
  std::function<bool(const ShortExactSeq&)> contains;
};

/// Sequences whose projection admits a section.
ConflationClass split_class();
/// Sequences certified stable at the given bound (verdicts memoized behind
/// an internal lock, so the class is shareable across sweep threads).
ConflationClass stable_class(int bound);
/// Every kernel-cokernel pair (membership is the ShortExactSeq invariant).
ConflationClass all_kcp_class();
/// The empty class (negative control: fails the unit axiom).
ConflationClass empty_class();

/// Per-axiom outcome. `cases` counts the instances checked; on failure,
/// `detail` names the reason and `witness` carries the morphism that
/// replays it (the composite, the pullback direction, ...).
struct AxiomOutcome {
  std::string axiom;
  bool pass = false;
  int cases = 0;
  std::string detail;
  std::optional<Mor> witness;
};

struct AxiomReport {
  std::string instance;
  std::string class_name;
  int bound = 0;
  std::vector<AxiomOutcome> outcomes;
  bool all_pass() const;
};

/// Deflations within bound (enumerated as cokernels with representable
/// kernels) whose sequences the class accepts. `dedup_iso` keeps one
/// representative per isomorphism class of the projection; every axiom
/// checked here is isomorphism-invariant, so verdicts are unaffected.
std::vector<ShortExactSeq> conflations_in(const Category& cat, const ConflationClass& cls,
                                          int bound, bool dedup_iso = true);

/// Unit axiom: the zero sequence over the zero object belongs to the class.
AxiomOutcome check_E0(const Category& cat, const ConflationClass& cls);
AxiomOutcome check_E0op(const Category& cat, const ConflationClass& cls);
/// Composition axiom: composable deflations (resp. inflations) in the class
/// compose to one, with the composite's sequence again in the class.
AxiomOutcome check_E1(const Category& cat, const ConflationClass& cls, int bound,
                      bool dedup_iso = true);
AxiomOutcome check_E1op(const Category& cat, const ConflationClass& cls, int bound,
                        bool dedup_iso = true);
/// Base-change axiom: pullbacks of deflations along arbitrary morphisms
/// exist and are deflations in the class (pushouts of inflations, dually).
AxiomOutcome check_E2(const Category& cat, const ConflationClass& cls, int bound,
                      bool dedup_iso = true);
AxiomOutcome check_E2op(const Category& cat, const ConflationClass& cls, int bound,
                        bool dedup_iso = true);
/// Cancellation axiom, deflation side: whenever p has a kernel and the
/// composite pd is a deflation in the class, p is one too; checked through
/// the traced cancellation construction. Sampled with deterministic strides
/// when hom-sets are large, so case counts stay bounded. The inflation side
/// runs the same sweep in the formal opposite.
AxiomOutcome check_obscure(const Category& cat, const ConflationClass& cls, int bound);
AxiomOutcome check_obscure_op(const Category& cat, const ConflationClass& cls, int bound);

/// Runs all eight checks; the report is complete even when some fail.
AxiomReport axiom_suite(const Category& cat, const ConflationClass& cls, int bound,
                        bool dedup_iso = true);

/// Evidence that no conflation class containing this sequence can satisfy
/// the base-change axioms: the recorded morphism makes the pullback of d
/// (resp. pushout of i) fail to exist or fail to be a cokernel (kernel).
struct MaximalityWitness {
  StabilityKind side = StabilityKind::Cokernel;
  Mor subject;           // the failing half of the sequence
  Mor witness;           // the morphism to pull back / push out along
  std::string failure;   // "PullbackMissing" | "NotACokernel" | ...
  std::string violated;  // "E2" or "E2op"
  bool replays = false;  // re-running the failing construction fails again
};

/// Throws std::runtime_error("InputStable: ...") when the sequence is stable.
MaximalityWitness maximality_witness(const ShortExactSeq& ses, int bound,
                                     StabilityContext* ctx = nullptr);

}  // namespace stabex
