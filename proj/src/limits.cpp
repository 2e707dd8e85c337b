#include "stabex/limits.hpp"

#include <sstream>
#include <stdexcept>

namespace stabex {

namespace {

// Rows: flatten of each generator of hom(T, X).
Matrix gen_flat(const Category* cat, const Obj& T, const Obj& X) {
  auto gens = cat->hom_generators(T, X);
  Matrix m(gens.size(), cat->flat_len(T, X), cat->modulus());
  for (size_t i = 0; i < gens.size(); ++i) {
    auto v = cat->flatten(gens[i]);
    for (size_t j = 0; j < v.size(); ++j) m.at(i, j) = v[j];
  }
  return m;
}

// Rows: flatten(f . g_i) over generators g_i of hom(T, dom f).
Matrix post_flat(const Mor& f, const Obj& T) {
  const Category* cat = f.cat();
  auto gens = cat->hom_generators(T, f.dom);
  Matrix m(gens.size(), cat->flat_len(T, f.cod), cat->modulus());
  for (size_t i = 0; i < gens.size(); ++i) {
    auto v = cat->flatten(cat->compose(f, gens[i]));
    for (size_t j = 0; j < v.size(); ++j) m.at(i, j) = v[j];
  }
  return m;
}

// Rows: flatten(g_i . f) over generators g_i of hom(cod f, T).
Matrix pre_flat(const Mor& f, const Obj& T) {
  const Category* cat = f.cat();
  auto gens = cat->hom_generators(f.cod, T);
  Matrix m(gens.size(), cat->flat_len(f.dom, T), cat->modulus());
  for (size_t i = 0; i < gens.size(); ++i) {
    auto v = cat->flatten(cat->compose(gens[i], f));
    for (size_t j = 0; j < v.size(); ++j) m.at(i, j) = v[j];
  }
  return m;
}

std::string apex_detail(const Category* cat, const Obj& T, const char* what) {
  return std::string(what) + " fails at apex " + cat->obj_key(T);
}

// ---- linear-mode universal property checks -------------------------------

VerifyResult kernel_check_linear(const Mor& f, const Mor& k, int bound) {
  const Category* cat = f.cat();
  if (!cat->is_zero_mor(cat->compose(f, k))) return {false, "f.k is not zero"};
  for (const Obj& T : cat->objects(bound)) {
    Matrix mk = post_flat(k, T);
    if (!left_nullspace(mk).mul(gen_flat(cat, T, k.dom)).is_zero())
      return {false, apex_detail(cat, T, "mediator uniqueness")};
    Matrix cone = left_nullspace(post_flat(f, T)).mul(gen_flat(cat, T, f.dom));
    if (!row_module_contains_all(howell_form(mk), cone))
      return {false, apex_detail(cat, T, "mediator existence")};
  }
  return {true, ""};
}

VerifyResult cokernel_check_linear(const Mor& f, const Mor& c, int bound) {
  const Category* cat = f.cat();
  if (!cat->is_zero_mor(cat->compose(c, f))) return {false, "c.f is not zero"};
  for (const Obj& T : cat->objects(bound)) {
    Matrix mc = pre_flat(c, T);
    if (!left_nullspace(mc).mul(gen_flat(cat, c.cod, T)).is_zero())
      return {false, apex_detail(cat, T, "mediator uniqueness")};
    Matrix cocone = left_nullspace(pre_flat(f, T)).mul(gen_flat(cat, f.cod, T));
    if (!row_module_contains_all(howell_form(mc), cocone))
      return {false, apex_detail(cat, T, "mediator existence")};
  }
  return {true, ""};
}

VerifyResult pullback_check_linear(const Mor& d, const Mor& h, const Mor& g, const Mor& dp,
                                   int bound) {
  const Category* cat = d.cat();
  if (!cat->mor_eq(cat->compose(d, g), cat->compose(h, dp)))
    return {false, "square does not commute"};
  const Obj &B = d.dom, &Cp = h.dom, &P = g.dom;
  RingSpec ring(cat->modulus());
  for (const Obj& T : cat->objects(bound)) {
    size_t lb = cat->flat_len(T, B), lc = cat->flat_len(T, Cp);
    // hom(T,P) -> hom(T,B) (+) hom(T,C'), m |-> (g.m, d'.m).
    auto pgens = cat->hom_generators(T, P);
    Matrix mp(pgens.size(), lb + lc, cat->modulus());
    for (size_t i = 0; i < pgens.size(); ++i) {
      auto vb = cat->flatten(cat->compose(g, pgens[i]));
      auto vc = cat->flatten(cat->compose(dp, pgens[i]));
      for (size_t j = 0; j < lb; ++j) mp.at(i, j) = vb[j];
      for (size_t j = 0; j < lc; ++j) mp.at(i, lb + j) = vc[j];
    }
    if (!left_nullspace(mp).mul(gen_flat(cat, T, P)).is_zero())
      return {false, apex_detail(cat, T, "mediator uniqueness")};
    // Cone module {(tB, tC) : d.tB = h.tC} inside the product coordinates.
    auto bgens = cat->hom_generators(T, B);
    auto cgens = cat->hom_generators(T, Cp);
    size_t lC = cat->flat_len(T, d.cod);
    Matrix sys(bgens.size() + cgens.size(), lC, cat->modulus());
    for (size_t i = 0; i < bgens.size(); ++i) {
      auto v = cat->flatten(cat->compose(d, bgens[i]));
      for (size_t j = 0; j < lC; ++j) sys.at(i, j) = v[j];
    }
    for (size_t i = 0; i < cgens.size(); ++i) {
      auto v = cat->flatten(cat->compose(h, cgens[i]));
      for (size_t j = 0; j < lC; ++j) sys.at(bgens.size() + i, j) = ring.neg(v[j]);
    }
    Matrix cone = left_nullspace(sys).mul(
        Matrix::block_diag(gen_flat(cat, T, B), gen_flat(cat, T, Cp)));
    if (!row_module_contains_all(howell_form(mp), cone))
      return {false, apex_detail(cat, T, "mediator existence")};
  }
  return {true, ""};
}

VerifyResult pushout_check_linear(const Mor& i, const Mor& f, const Mor& ip, const Mor& fp,
                                  int bound) {
  const Category* cat = i.cat();
  if (!cat->mor_eq(cat->compose(ip, f), cat->compose(fp, i)))
    return {false, "square does not commute"};
  const Obj &B = i.cod, &Ap = f.cod, &Q = ip.cod;
  RingSpec ring(cat->modulus());
  for (const Obj& T : cat->objects(bound)) {
    size_t la = cat->flat_len(Ap, T), lb = cat->flat_len(B, T);
    // hom(Q,T) -> hom(A',T) (+) hom(B,T), s |-> (s.i', s.f').
    auto qgens = cat->hom_generators(Q, T);
    Matrix mq(qgens.size(), la + lb, cat->modulus());
    for (size_t r = 0; r < qgens.size(); ++r) {
      auto va = cat->flatten(cat->compose(qgens[r], ip));
      auto vb = cat->flatten(cat->compose(qgens[r], fp));
      for (size_t j = 0; j < la; ++j) mq.at(r, j) = va[j];
      for (size_t j = 0; j < lb; ++j) mq.at(r, la + j) = vb[j];
    }
    if (!left_nullspace(mq).mul(gen_flat(cat, Q, T)).is_zero())
      return {false, apex_detail(cat, T, "mediator uniqueness")};
    // Cocone module {(tA, tB) : tA.f = tB.i}.
    auto agens = cat->hom_generators(Ap, T);
    auto bgens = cat->hom_generators(B, T);
    size_t lA = cat->flat_len(i.dom, T);
    Matrix sys(agens.size() + bgens.size(), lA, cat->modulus());
    for (size_t r = 0; r < agens.size(); ++r) {
      auto v = cat->flatten(cat->compose(agens[r], f));
      for (size_t j = 0; j < lA; ++j) sys.at(r, j) = v[j];
    }
    for (size_t r = 0; r < bgens.size(); ++r) {
      auto v = cat->flatten(cat->compose(bgens[r], i));
      for (size_t j = 0; j < lA; ++j) sys.at(agens.size() + r, j) = ring.neg(v[j]);
    }
    Matrix cocone = left_nullspace(sys).mul(
        Matrix::block_diag(gen_flat(cat, Ap, T), gen_flat(cat, B, T)));
    if (!row_module_contains_all(howell_form(mq), cocone))
      return {false, apex_detail(cat, T, "mediator existence")};
  }
  return {true, ""};
}

// ---- exhaustive-mode universal property checks ---------------------------

VerifyResult kernel_check_exhaustive(const Mor& f, const Mor& k, int bound) {
  const Category* cat = f.cat();
  if (!cat->is_zero_mor(cat->compose(f, k))) return {false, "f.k is not zero"};
  for (const Obj& T : cat->objects(bound)) {
    for (const Mor& t : cat->hom(T, f.dom)) {
      if (!cat->is_zero_mor(cat->compose(f, t))) continue;
      size_t count = 0;
      for (const Mor& u : cat->hom(T, k.dom))
        if (cat->mor_eq(cat->compose(k, u), t)) ++count;
      if (count != 1)
        return {false, apex_detail(cat, T, count ? "mediator uniqueness" : "mediator existence") +
                           " for cone " + cat->mor_key(t)};
    }
  }
  return {true, ""};
}

VerifyResult cokernel_check_exhaustive(const Mor& f, const Mor& c, int bound) {
  const Category* cat = f.cat();
  if (!cat->is_zero_mor(cat->compose(c, f))) return {false, "c.f is not zero"};
  for (const Obj& T : cat->objects(bound)) {
    for (const Mor& t : cat->hom(f.cod, T)) {
      if (!cat->is_zero_mor(cat->compose(t, f))) continue;
      size_t count = 0;
      for (const Mor& s : cat->hom(c.cod, T))
        if (cat->mor_eq(cat->compose(s, c), t)) ++count;
      if (count != 1)
        return {false, apex_detail(cat, T, count ? "mediator uniqueness" : "mediator existence") +
                           " for cocone " + cat->mor_key(t)};
    }
  }
  return {true, ""};
}

VerifyResult pullback_check_exhaustive(const Mor& d, const Mor& h, const Mor& g, const Mor& dp,
                                       int bound) {
  const Category* cat = d.cat();
  if (!cat->mor_eq(cat->compose(d, g), cat->compose(h, dp)))
    return {false, "square does not commute"};
  for (const Obj& T : cat->objects(bound)) {
    for (const Mor& tb : cat->hom(T, d.dom)) {
      for (const Mor& tc : cat->hom(T, h.dom)) {
        if (!cat->mor_eq(cat->compose(d, tb), cat->compose(h, tc))) continue;
        size_t count = 0;
        for (const Mor& u : cat->hom(T, g.dom))
          if (cat->mor_eq(cat->compose(g, u), tb) && cat->mor_eq(cat->compose(dp, u), tc))
            ++count;
        if (count != 1)
          return {false,
                  apex_detail(cat, T, count ? "mediator uniqueness" : "mediator existence")};
      }
    }
  }
  return {true, ""};
}

VerifyResult pushout_check_exhaustive(const Mor& i, const Mor& f, const Mor& ip, const Mor& fp,
                                      int bound) {
  const Category* cat = i.cat();
  if (!cat->mor_eq(cat->compose(ip, f), cat->compose(fp, i)))
    return {false, "square does not commute"};
  for (const Obj& T : cat->objects(bound)) {
    for (const Mor& ta : cat->hom(f.cod, T)) {
      for (const Mor& tb : cat->hom(i.cod, T)) {
        if (!cat->mor_eq(cat->compose(ta, f), cat->compose(tb, i))) continue;
        size_t count = 0;
        for (const Mor& s : cat->hom(ip.cod, T))
          if (cat->mor_eq(cat->compose(s, ip), ta) && cat->mor_eq(cat->compose(s, fp), tb))
            ++count;
        if (count != 1)
          return {false,
                  apex_detail(cat, T, count ? "mediator uniqueness" : "mediator existence")};
      }
    }
  }
  return {true, ""};
}

KernelCert make_kernel_cert(const Mor& f, const Mor& k) {
  const Category* cat = f.cat();
  return KernelCert{f, k, [cat, f, k](const Mor& t) -> std::optional<Mor> {
                      if (!cat->is_zero_mor(cat->compose(f, t))) return std::nullopt;
                      return solve_post(k, t);
                    }};
}

CokernelCert make_cokernel_cert(const Mor& f, const Mor& c) {
  const Category* cat = f.cat();
  return CokernelCert{f, c, [cat, f, c](const Mor& t) -> std::optional<Mor> {
                        if (!cat->is_zero_mor(cat->compose(t, f))) return std::nullopt;
                        return solve_pre(c, t);
                      }};
}

}  // namespace

bool is_kernel_of(const Mor& f, const Mor& k, int bound, VerifyMode mode) {
  return (mode == VerifyMode::Linear ? kernel_check_linear(f, k, bound)
                                     : kernel_check_exhaustive(f, k, bound))
      .pass;
}

bool is_cokernel_of(const Mor& f, const Mor& c, int bound, VerifyMode mode) {
  return (mode == VerifyMode::Linear ? cokernel_check_linear(f, c, bound)
                                     : cokernel_check_exhaustive(f, c, bound))
      .pass;
}

bool is_pullback_square(const Mor& d, const Mor& h, const Mor& g, const Mor& dp, int bound,
                        VerifyMode mode) {
  return (mode == VerifyMode::Linear ? pullback_check_linear(d, h, g, dp, bound)
                                     : pullback_check_exhaustive(d, h, g, dp, bound))
      .pass;
}

bool is_pushout_square(const Mor& i, const Mor& f, const Mor& ip, const Mor& fp, int bound,
                       VerifyMode mode) {
  return (mode == VerifyMode::Linear ? pushout_check_linear(i, f, ip, fp, bound)
                                     : pushout_check_exhaustive(i, f, ip, fp, bound))
      .pass;
}

VerifyResult verify_universal(const KernelCert& cert, int bound, VerifyMode mode) {
  return mode == VerifyMode::Linear ? kernel_check_linear(cert.f, cert.k, bound)
                                    : kernel_check_exhaustive(cert.f, cert.k, bound);
}
VerifyResult verify_universal(const CokernelCert& cert, int bound, VerifyMode mode) {
  return mode == VerifyMode::Linear ? cokernel_check_linear(cert.f, cert.c, bound)
                                    : cokernel_check_exhaustive(cert.f, cert.c, bound);
}
VerifyResult verify_universal(const PullbackSquare& sq, int bound, VerifyMode mode) {
  return mode == VerifyMode::Linear
             ? pullback_check_linear(sq.d, sq.h, sq.g, sq.dprime, bound)
             : pullback_check_exhaustive(sq.d, sq.h, sq.g, sq.dprime, bound);
}
VerifyResult verify_universal(const PushoutSquare& sq, int bound, VerifyMode mode) {
  return mode == VerifyMode::Linear
             ? pushout_check_linear(sq.i, sq.f, sq.iprime, sq.fprime, bound)
             : pushout_check_exhaustive(sq.i, sq.f, sq.iprime, sq.fprime, bound);
}

LimitOutcome<KernelCert> kernel(const Mor& f, std::optional<int> oracle_bound) {
  const Category* cat = f.cat();
  MorRule rule = cat->kernel_rule(f);
  if (rule.verdict == RuleVerdict::NoRule) {
    if (!oracle_bound)
      throw std::runtime_error("kernel: instance has no decision rule and no oracle bound given");
    for (const Obj& K : cat->objects(*oracle_bound))
      for (const Mor& k : cat->hom(K, f.dom))
        if (cat->is_zero_mor(cat->compose(f, k)) && is_kernel_of(f, k, *oracle_bound))
          return {make_kernel_cert(f, k), ""};
    return {std::nullopt, "no kernel found within bound " + std::to_string(*oracle_bound)};
  }
  if (rule.verdict == RuleVerdict::Representable) {
    if (oracle_bound && !is_kernel_of(f, *rule.mor, *oracle_bound))
      throw std::logic_error("kernel: decision rule disagrees with oracle (false positive)");
    return {make_kernel_cert(f, *rule.mor), ""};
  }
  if (oracle_bound) {
    for (const Obj& K : cat->objects(*oracle_bound))
      for (const Mor& k : cat->hom(K, f.dom))
        if (cat->is_zero_mor(cat->compose(f, k)) && is_kernel_of(f, k, *oracle_bound))
          throw std::logic_error("kernel: decision rule disagrees with oracle (false negative)");
  }
  return {std::nullopt, rule.reason.empty() ? "kernel not representable" : rule.reason};
}

LimitOutcome<CokernelCert> cokernel(const Mor& f, std::optional<int> oracle_bound) {
  const Category* cat = f.cat();
  MorRule rule = cat->cokernel_rule(f);
  if (rule.verdict == RuleVerdict::NoRule) {
    if (!oracle_bound)
      throw std::runtime_error("cokernel: instance has no decision rule and no oracle bound given");
    for (const Obj& C : cat->objects(*oracle_bound))
      for (const Mor& c : cat->hom(f.cod, C))
        if (cat->is_zero_mor(cat->compose(c, f)) && is_cokernel_of(f, c, *oracle_bound))
          return {make_cokernel_cert(f, c), ""};
    return {std::nullopt, "no cokernel found within bound " + std::to_string(*oracle_bound)};
  }
  if (rule.verdict == RuleVerdict::Representable) {
    if (oracle_bound && !is_cokernel_of(f, *rule.mor, *oracle_bound))
      throw std::logic_error("cokernel: decision rule disagrees with oracle (false positive)");
    return {make_cokernel_cert(f, *rule.mor), ""};
  }
  if (oracle_bound) {
    for (const Obj& C : cat->objects(*oracle_bound))
      for (const Mor& c : cat->hom(f.cod, C))
        if (cat->is_zero_mor(cat->compose(c, f)) && is_cokernel_of(f, c, *oracle_bound))
          throw std::logic_error("cokernel: decision rule disagrees with oracle (false negative)");
  }
  return {std::nullopt, rule.reason.empty() ? "cokernel not representable" : rule.reason};
}

LimitOutcome<PullbackSquare> pullback(const Mor& d, const Mor& h, std::optional<int> oracle_bound) {
  const Category* cat = d.cat();
  if (!cat->obj_eq(d.cod, h.cod)) throw std::invalid_argument("pullback: cospan codomain mismatch");
  BiproductCert bp = cat->biproduct(h.dom, d.dom);  // C' (+) B
  Mor hd = cat->block_row(h, d);                    // [h d]: C' (+) B -> C
  auto ko = kernel(hd, oracle_bound);
  if (!ko.ok()) return {std::nullopt, "pullback kernel not representable: " + ko.refutation};
  const Mor& k = ko.cert->k;  // reads [d'; -g] under the fixed sign convention
  PullbackSquare sq;
  sq.d = d;
  sq.h = h;
  sq.apex = k.dom;
  sq.dprime = cat->compose(bp.proj1, k);
  sq.g = cat->negate(cat->compose(bp.proj2, k));
  KernelCert kc = *ko.cert;
  sq.mediate = [cat, d, h, bp, kc](const Mor& tB, const Mor& tC) -> std::optional<Mor> {
    if (!cat->mor_eq(cat->compose(d, tB), cat->compose(h, tC))) return std::nullopt;
    Mor t = cat->add(cat->compose(bp.inj1, tC), cat->compose(bp.inj2, cat->negate(tB)));
    return kc.mediate(t);
  };
  return {sq, ""};
}

LimitOutcome<PushoutSquare> pushout(const Mor& i, const Mor& f, std::optional<int> oracle_bound) {
  const Category* cat = i.cat();
  if (!cat->obj_eq(i.dom, f.dom)) throw std::invalid_argument("pushout: span domain mismatch");
  BiproductCert bp = cat->biproduct(f.cod, i.cod);  // A' (+) B
  Mor fi = cat->block_col(f, cat->negate(i));       // [f; -i]: A -> A' (+) B
  auto co = cokernel(fi, oracle_bound);
  if (!co.ok()) return {std::nullopt, "pushout cokernel not representable: " + co.refutation};
  const Mor& c = co.cert->c;
  PushoutSquare sq;
  sq.i = i;
  sq.f = f;
  sq.apex = c.cod;
  sq.iprime = cat->compose(c, bp.inj1);
  sq.fprime = cat->compose(c, bp.inj2);
  CokernelCert cc = *co.cert;
  sq.mediate = [cat, i, f, cc](const Mor& tA, const Mor& tB) -> std::optional<Mor> {
    if (!cat->mor_eq(cat->compose(tA, f), cat->compose(tB, i))) return std::nullopt;
    Mor t = cat->block_row(tA, tB);
    return cc.mediate(t);
  };
  return {sq, ""};
}

bool is_kernel_mor(const Mor& f, int bound) {
  const Category* cat = f.cat();
  if (auto fast = cat->is_kernel_rule(f)) return *fast;
  for (const Obj& T : cat->objects(bound))
    for (const Mor& m : cat->hom(f.cod, T))
      if (cat->is_zero_mor(cat->compose(m, f)) && is_kernel_of(m, f, bound)) return true;
  return false;
}

bool is_cokernel_mor(const Mor& f, int bound) {
  const Category* cat = f.cat();
  if (auto fast = cat->is_cokernel_rule(f)) return *fast;
  for (const Obj& T : cat->objects(bound))
    for (const Mor& m : cat->hom(T, f.dom))
      if (cat->is_zero_mor(cat->compose(f, m)) && is_cokernel_of(m, f, bound)) return true;
  return false;
}

PasteVerdict paste_pullback(const Square& left, const PullbackSquare& right, int bound,
                            VerifyMode mode) {
  const Category* cat = left.top.cat();
  if (!cat->mor_eq(left.right, right.dprime))
    throw std::invalid_argument("paste_pullback: left square must share the pullback's C'-leg");
  if (!cat->mor_eq(cat->compose(left.right, left.top), cat->compose(left.bottom, left.left)))
    throw std::invalid_argument("paste_pullback: left square does not commute");
  PasteVerdict v;
  v.left_is_pullback =
      is_pullback_square(left.right, left.bottom, left.top, left.left, bound, mode);
  Mor rect_top = cat->compose(right.g, left.top);       // X -> B
  Mor rect_bottom = cat->compose(right.h, left.bottom); // Y -> C
  v.rectangle_is_pullback =
      is_pullback_square(right.d, rect_bottom, rect_top, left.left, bound, mode);
  v.equivalent = (v.left_is_pullback == v.rectangle_is_pullback);
  v.detail = std::string("left=") + (v.left_is_pullback ? "pullback" : "not") +
             ", rectangle=" + (v.rectangle_is_pullback ? "pullback" : "not");
  return v;
}

KernelCert kernel_lift(const KernelCert& i, const PullbackSquare& sq, int oracle_bound,
                       VerifyMode mode) {
  const Category* cat = i.f.cat();
  if (!cat->mor_eq(i.f, sq.d))
    throw std::invalid_argument("kernel_lift: certificate is not a kernel of the pulled-back map");
  Obj A = i.k.dom;
  auto ip = sq.mediate(i.k, cat->zero_mor(A, sq.h.dom));
  if (!ip) throw std::logic_error("kernel_lift: pullback mediator rejected the cone (k, 0)");
  if (!cat->mor_eq(cat->compose(sq.g, *ip), i.k) || !cat->is_zero_mor(cat->compose(sq.dprime, *ip)))
    throw std::logic_error("kernel_lift: mediator output violates the cone equations");
  if (!is_kernel_of(sq.dprime, *ip, oracle_bound, mode))
    throw std::logic_error("kernel_lift: lifted inclusion failed kernel certification");
  Mor iprime = *ip;
  KernelCert base = i;
  Mor g = sq.g;
  Mor dp = sq.dprime;
  return KernelCert{dp, iprime, [cat, base, g, dp, iprime](const Mor& t) -> std::optional<Mor> {
                      if (!cat->is_zero_mor(cat->compose(dp, t))) return std::nullopt;
                      auto u = base.mediate(cat->compose(g, t));
                      if (!u || !cat->mor_eq(cat->compose(iprime, *u), t)) return std::nullopt;
                      return u;
                    }};
}

}  // namespace stabex
