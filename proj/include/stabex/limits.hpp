#pragma once

#include <functional>
#include <optional>
#include <string>

#include "stabex/category.hpp"

namespace stabex {

/// Oracle mode: Exhaustive enumerates every test cone morphism; Linear checks
/// the same universal property by Z/n-linear algebra on hom modules (same
/// verdicts, much faster at scale).
enum class VerifyMode { Exhaustive, Linear };

struct VerifyResult {
  bool pass = false;
  std::string detail;  // counterexample description on failure
};

/// Kernel certificate: f.k == 0 and every t with f.t == 0 factors uniquely
/// through k. mediate returns that factorization (nullopt if t is not a cone).
struct KernelCert {
  Mor f;  // the morphism this is a kernel of
  Mor k;  // inclusion K -> dom(f)
  std::function<std::optional<Mor>(const Mor& t)> mediate;
};

struct CokernelCert {
  Mor f;  // the morphism this is a cokernel of
  Mor c;  // projection cod(f) -> C
  std::function<std::optional<Mor>(const Mor& t)> mediate;
};

/// Pullback of the cospan d: B -> C, h: C' -> C. Legs g: P -> B and
/// d': P -> C' satisfy d.g == h.d'. mediate(tB, tC) solves for the unique
/// u: T -> P with g.u == tB and d'.u == tC.
struct PullbackSquare {
  Mor d, h;
  Obj apex;
  Mor g, dprime;
  std::function<std::optional<Mor>(const Mor& tB, const Mor& tC)> mediate;
};

/// Pushout of the span i: A -> B, f: A -> A'. Legs i': A' -> Q and
/// f': B -> Q satisfy i'.f == f'.i.
struct PushoutSquare {
  Mor i, f;
  Obj apex;
  Mor iprime, fprime;
  std::function<std::optional<Mor>(const Mor& tA, const Mor& tB)> mediate;
};

template <typename Cert>
struct LimitOutcome {
  std::optional<Cert> cert;
  std::string refutation;  // reason when not representable
  bool ok() const { return cert.has_value(); }
};

/// Compute (co)kernels through the instance decision rule, falling back to a
/// bounded search when the instance has no rule. When oracle_bound is given,
/// positive results are verified and negative ones refuted candidate by
/// candidate; a disagreement between rule and oracle throws (instance bug).
LimitOutcome<KernelCert> kernel(const Mor& f, std::optional<int> oracle_bound = std::nullopt);
LimitOutcome<CokernelCert> cokernel(const Mor& f, std::optional<int> oracle_bound = std::nullopt);

/// Pullback as the kernel of [h d]: C'+ B -> C, unpacked with the fixed sign
/// convention: the kernel inclusion reads [d'; -g].
LimitOutcome<PullbackSquare> pullback(const Mor& d, const Mor& h,
                                      std::optional<int> oracle_bound = std::nullopt);
/// Pushout as the cokernel of [f; -i]: A -> A' + B (dual convention).
LimitOutcome<PushoutSquare> pushout(const Mor& i, const Mor& f,
                                    std::optional<int> oracle_bound = std::nullopt);

VerifyResult verify_universal(const KernelCert&, int bound, VerifyMode mode = VerifyMode::Linear);
VerifyResult verify_universal(const CokernelCert&, int bound, VerifyMode mode = VerifyMode::Linear);
VerifyResult verify_universal(const PullbackSquare&, int bound, VerifyMode mode = VerifyMode::Linear);
VerifyResult verify_universal(const PushoutSquare&, int bound, VerifyMode mode = VerifyMode::Linear);

/// Bounded decisions for "this concrete cone is limiting".
bool is_kernel_of(const Mor& f, const Mor& k, int bound, VerifyMode mode = VerifyMode::Linear);
bool is_cokernel_of(const Mor& f, const Mor& c, int bound, VerifyMode mode = VerifyMode::Linear);
bool is_pullback_square(const Mor& d, const Mor& h, const Mor& g, const Mor& dprime, int bound,
                        VerifyMode mode = VerifyMode::Linear);
bool is_pushout_square(const Mor& i, const Mor& f, const Mor& iprime, const Mor& fprime, int bound,
                       VerifyMode mode = VerifyMode::Linear);

/// Is f a kernel (resp. cokernel) of some morphism? Uses the instance fast
/// path when present, otherwise a bounded search over codomains (resp.
/// domains) within bound.
bool is_kernel_mor(const Mor& f, int bound);
bool is_cokernel_mor(const Mor& f, int bound);

/// A commuting square in pullback orientation: right.top == bottom.left,
/// with top: X -> P, left: X -> Y, right: P -> C', bottom: Y -> C'.
struct Square {
  Mor top, left, bottom, right;
};

struct PasteVerdict {
  bool left_is_pullback = false;
  bool rectangle_is_pullback = false;
  bool equivalent = false;  // the two verdicts agree (the pasting law)
  std::string detail;
};

/// Pasting law: with the right square a pullback, the left square is a
/// pullback iff the composed rectangle is. The left square's right edge must
/// be the pullback's C'-leg.
PasteVerdict paste_pullback(const Square& left, const PullbackSquare& right, int bound,
                            VerifyMode mode = VerifyMode::Linear);

/// Kernel lifting: given i = ker(d) and a pullback of d along h, produce
/// i': A -> P with g.i' = i.k and d'.i' = 0, certified as the kernel of d'.
/// Throws if the mediator or certification fails (instance bug).
KernelCert kernel_lift(const KernelCert& i, const PullbackSquare& sq, int oracle_bound,
                       VerifyMode mode = VerifyMode::Linear);

}  // namespace stabex
