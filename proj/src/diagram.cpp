#include "stabex/diagram.hpp"

#include <sstream>
#include <stdexcept>

namespace stabex {

namespace {

struct DiagObjData : ObjData {
  std::vector<Obj> pos;
  std::vector<Mor> edges;
};

struct DiagMorData : MorData {
  std::vector<Mor> comps;
};

const DiagObjData& odata(const Obj& o) { return static_cast<const DiagObjData&>(*o.data); }
const DiagMorData& mdata(const Mor& m) { return static_cast<const DiagMorData&>(*m.data); }

}  // namespace

DiagramCategory::DiagramCategory(const Category* base, size_t len, bool ascend, bool ddzero,
                                 std::string label)
    : base_(base), len_(len), ascend_(ascend), ddzero_(ddzero), label_(std::move(label)) {
  if (len_ < 1) throw std::invalid_argument(label_ + ": length must be at least 1");
}

const std::vector<Obj>& DiagramCategory::positions(const Obj& o) { return odata(o).pos; }
const std::vector<Mor>& DiagramCategory::edges(const Obj& o) { return odata(o).edges; }
const std::vector<Mor>& DiagramCategory::components(const Mor& m) { return mdata(m).comps; }

Obj DiagramCategory::make_obj(std::vector<Obj> positions, std::vector<Mor> edges) const {
  if (positions.size() != len_ || edges.size() + 1 != len_)
    throw std::invalid_argument(label_ + ": wrong tuple sizes");
  for (size_t t = 0; t + 1 < len_; ++t) {
    const Obj& from = positions[ascend_ ? t : t + 1];
    const Obj& to = positions[ascend_ ? t + 1 : t];
    if (!base_->obj_eq(edges[t].dom, from) || !base_->obj_eq(edges[t].cod, to))
      throw std::invalid_argument(label_ + ": edge endpoints do not match positions");
  }
  if (ddzero_) {
    for (size_t t = 0; t + 2 < len_; ++t) {
      if (!base_->is_zero_mor(base_->compose(edges[t + 1], edges[t])))
        throw std::invalid_argument(label_ + ": consecutive differentials do not compose to zero");
    }
  }
  auto d = std::make_shared<DiagObjData>();
  d->pos = std::move(positions);
  d->edges = std::move(edges);
  return Obj{this, d};
}

Mor DiagramCategory::make_mor(const Obj& from, const Obj& to, std::vector<Mor> components) const {
  const auto& a = odata(from);
  const auto& b = odata(to);
  if (components.size() != len_) throw std::invalid_argument(label_ + ": wrong component count");
  for (size_t k = 0; k < len_; ++k) {
    if (!base_->obj_eq(components[k].dom, a.pos[k]) || !base_->obj_eq(components[k].cod, b.pos[k]))
      throw std::invalid_argument(label_ + ": component endpoints do not match positions");
  }
  for (size_t t = 0; t + 1 < len_; ++t) {
    Mor lhs, rhs;
    if (ascend_) {
      lhs = base_->compose(b.edges[t], components[t]);
      rhs = base_->compose(components[t + 1], a.edges[t]);
    } else {
      lhs = base_->compose(components[t], a.edges[t]);
      rhs = base_->compose(b.edges[t], components[t + 1]);
    }
    if (!base_->mor_eq(lhs, rhs))
      throw std::invalid_argument(label_ + ": components do not commute with the edges");
  }
  auto d = std::make_shared<DiagMorData>();
  d->comps = std::move(components);
  return Mor{from, to, d};
}

std::string DiagramCategory::name() const {
  return label_ + "(" + base_->name() + "," + std::to_string(len_) + ")";
}

std::string DiagramCategory::obj_key(const Obj& o) const {
  const auto& d = odata(o);
  std::ostringstream s;
  s << label_ << "[";
  for (size_t k = 0; k < len_; ++k) s << (k ? "," : "") << base_->obj_key(d.pos[k]);
  s << "|";
  for (size_t t = 0; t + 1 < len_; ++t) s << (t ? ";" : "") << base_->mor_key(d.edges[t]);
  s << "]";
  return s.str();
}

Obj DiagramCategory::zero_obj() const {
  std::vector<Obj> pos(len_, base_->zero_obj());
  std::vector<Mor> edges(len_ > 0 ? len_ - 1 : 0,
                         base_->zero_mor(base_->zero_obj(), base_->zero_obj()));
  return make_obj(std::move(pos), std::move(edges));
}

Mor DiagramCategory::identity(const Obj& o) const {
  std::vector<Mor> comps;
  for (const Obj& p : odata(o).pos) comps.push_back(base_->identity(p));
  return make_mor(o, o, std::move(comps));
}

Mor DiagramCategory::zero_mor(const Obj& a, const Obj& b) const {
  std::vector<Mor> comps;
  for (size_t k = 0; k < len_; ++k)
    comps.push_back(base_->zero_mor(odata(a).pos[k], odata(b).pos[k]));
  return make_mor(a, b, std::move(comps));
}

Mor DiagramCategory::compose(const Mor& g, const Mor& f) const {
  std::vector<Mor> comps;
  for (size_t k = 0; k < len_; ++k)
    comps.push_back(base_->compose(mdata(g).comps[k], mdata(f).comps[k]));
  return make_mor(f.dom, g.cod, std::move(comps));
}

Mor DiagramCategory::add(const Mor& f, const Mor& g) const {
  std::vector<Mor> comps;
  for (size_t k = 0; k < len_; ++k)
    comps.push_back(base_->add(mdata(f).comps[k], mdata(g).comps[k]));
  return make_mor(f.dom, f.cod, std::move(comps));
}

Mor DiagramCategory::negate(const Mor& f) const {
  std::vector<Mor> comps;
  for (const Mor& c : mdata(f).comps) comps.push_back(base_->negate(c));
  return make_mor(f.dom, f.cod, std::move(comps));
}

BiproductCert DiagramCategory::biproduct(const Obj& a, const Obj& b) const {
  std::vector<BiproductCert> parts;
  for (size_t k = 0; k < len_; ++k)
    parts.push_back(base_->biproduct(odata(a).pos[k], odata(b).pos[k]));
  std::vector<Obj> pos;
  for (const auto& p : parts) pos.push_back(p.sum);
  std::vector<Mor> edges;
  for (size_t t = 0; t + 1 < len_; ++t)
    edges.push_back(base_->diag_mor(odata(a).edges[t], odata(b).edges[t]));
  Obj sum = make_obj(std::move(pos), std::move(edges));
  auto comps_of = [&](auto pick) {
    std::vector<Mor> comps;
    for (const auto& p : parts) comps.push_back(pick(p));
    return comps;
  };
  BiproductCert out;
  out.sum = sum;
  out.inj1 = make_mor(a, sum, comps_of([](const BiproductCert& p) { return p.inj1; }));
  out.inj2 = make_mor(b, sum, comps_of([](const BiproductCert& p) { return p.inj2; }));
  out.proj1 = make_mor(sum, a, comps_of([](const BiproductCert& p) { return p.proj1; }));
  out.proj2 = make_mor(sum, b, comps_of([](const BiproductCert& p) { return p.proj2; }));
  return out;
}

std::vector<Obj> DiagramCategory::objects(int bound) const {
  std::vector<Obj> base_objs = base_->objects(bound);
  std::vector<Obj> out;
  std::vector<Obj> pos;
  std::vector<Mor> edges;
  // Depth-first over positions then edges, in enumeration order.
  std::function<void()> pick_edges = [&]() {
    size_t t = edges.size();
    if (t + 1 == len_) {
      out.push_back(make_obj(pos, edges));
      return;
    }
    const Obj& from = pos[ascend_ ? t : t + 1];
    const Obj& to = pos[ascend_ ? t + 1 : t];
    for (const Mor& e : base_->hom(from, to)) {
      if (ddzero_ && t > 0 && !base_->is_zero_mor(base_->compose(e, edges[t - 1]))) continue;
      edges.push_back(e);
      pick_edges();
      edges.pop_back();
    }
  };
  std::function<void()> pick_pos = [&]() {
    if (pos.size() == len_) {
      pick_edges();
      return;
    }
    for (const Obj& o : base_objs) {
      pos.push_back(o);
      pick_pos();
      pos.pop_back();
    }
  };
  pick_pos();
  return out;
}

size_t DiagramCategory::flat_len(const Obj& a, const Obj& b) const {
  size_t total = 0;
  for (size_t k = 0; k < len_; ++k) total += base_->flat_len(odata(a).pos[k], odata(b).pos[k]);
  return total;
}

std::vector<uint32_t> DiagramCategory::flatten(const Mor& m) const {
  std::vector<uint32_t> out;
  for (const Mor& c : mdata(m).comps) {
    auto v = base_->flatten(c);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

Mor DiagramCategory::unflatten(const Obj& a, const Obj& b,
                               const std::vector<uint32_t>& coords) const {
  // Callers pass coordinates of genuine diagram morphisms (combinations of
  // hom_generators), so the split components commute by linearity.
  std::vector<Mor> comps;
  size_t off = 0;
  for (size_t k = 0; k < len_; ++k) {
    size_t l = base_->flat_len(odata(a).pos[k], odata(b).pos[k]);
    std::vector<uint32_t> seg(coords.begin() + off, coords.begin() + off + l);
    comps.push_back(base_->unflatten(odata(a).pos[k], odata(b).pos[k], seg));
    off += l;
  }
  auto d = std::make_shared<DiagMorData>();
  d->comps = std::move(comps);
  return Mor{a, b, d};
}

std::vector<Mor> DiagramCategory::hom_generators(const Obj& a, const Obj& b) const {
  const auto& A = odata(a);
  const auto& B = odata(b);
  size_t total = flat_len(a, b);
  if (total == 0) return {};
  // Each edge contributes the linear constraint "component square commutes";
  // solutions form a submodule of the product of the positionwise hom
  // modules, generated by the nullspace rows below.
  std::vector<size_t> clen(len_ - 1, 0);
  size_t ctot = 0;
  for (size_t t = 0; t + 1 < len_; ++t) {
    clen[t] = ascend_ ? base_->flat_len(A.pos[t], B.pos[t + 1])
                      : base_->flat_len(A.pos[t + 1], B.pos[t]);
    ctot += clen[t];
  }
  auto unit_component = [&](size_t k, size_t j) {
    std::vector<uint32_t> u(base_->flat_len(A.pos[k], B.pos[k]), 0);
    u[j] = 1;
    return base_->unflatten(A.pos[k], B.pos[k], u);
  };
  if (ctot == 0) {
    std::vector<Mor> gens;
    size_t off = 0;
    for (size_t k = 0; k < len_; ++k) {
      size_t l = base_->flat_len(A.pos[k], B.pos[k]);
      for (size_t j = 0; j < l; ++j) {
        std::vector<uint32_t> coords(total, 0);
        coords[off + j] = 1;
        gens.push_back(unflatten(a, b, coords));
      }
      off += l;
    }
    return gens;
  }
  Matrix sys(total, ctot, modulus());
  size_t row = 0;
  for (size_t k = 0; k < len_; ++k) {
    size_t l = base_->flat_len(A.pos[k], B.pos[k]);
    for (size_t j = 0; j < l; ++j, ++row) {
      Mor fk = unit_component(k, j);
      size_t coff = 0;
      for (size_t t = 0; t + 1 < len_; ++t) {
        std::optional<Mor> cval;
        if (ascend_) {
          // constraint_t = B.edge_t . f_t - f_{t+1} . A.edge_t
          if (t == k) cval = base_->compose(B.edges[t], fk);
          if (t + 1 == k) {
            Mor term = base_->negate(base_->compose(fk, A.edges[t]));
            cval = cval ? base_->add(*cval, term) : term;
          }
        } else {
          // constraint_t = f_t . A.edge_t - B.edge_t . f_{t+1}
          if (t == k) cval = base_->compose(fk, A.edges[t]);
          if (t + 1 == k) {
            Mor term = base_->negate(base_->compose(B.edges[t], fk));
            cval = cval ? base_->add(*cval, term) : term;
          }
        }
        if (cval) {
          auto v = base_->flatten(*cval);
          for (size_t i = 0; i < v.size(); ++i) sys.at(row, coff + i) = v[i];
        }
        coff += clen[t];
      }
    }
  }
  Matrix null = left_nullspace(sys);
  std::vector<Mor> gens;
  for (size_t r = 0; r < null.rows(); ++r) {
    std::vector<uint32_t> coords = null.row(r);
    bool zero = true;
    for (uint32_t c : coords) zero &= (c == 0);
    if (!zero) gens.push_back(unflatten(a, b, coords));
  }
  return gens;
}

MorRule DiagramCategory::kernel_rule(const Mor& f) const {
  const auto& X = odata(f.dom);
  std::vector<LimitOutcome<KernelCert>> certs;
  for (size_t k = 0; k < len_; ++k) {
    certs.push_back(kernel(mdata(f).comps[k]));
    if (!certs.back().ok()) {
      return {RuleVerdict::NotRepresentable, std::nullopt,
              "position " + std::to_string(k) + ": " + certs.back().refutation};
    }
  }
  std::vector<Obj> pos;
  std::vector<Mor> incl;
  for (const auto& c : certs) {
    pos.push_back(c.cert->k.dom);
    incl.push_back(c.cert->k);
  }
  std::vector<Mor> ked;
  for (size_t t = 0; t + 1 < len_; ++t) {
    std::optional<Mor> e =
        ascend_ ? certs[t + 1].cert->mediate(base_->compose(X.edges[t], incl[t]))
                : certs[t].cert->mediate(base_->compose(X.edges[t], incl[t + 1]));
    if (!e) throw std::logic_error(label_ + ": induced kernel edge failed to mediate");
    ked.push_back(*e);
  }
  Obj K = make_obj(std::move(pos), std::move(ked));
  return {RuleVerdict::Representable, make_mor(K, f.dom, std::move(incl)), ""};
}

MorRule DiagramCategory::cokernel_rule(const Mor& f) const {
  const auto& Y = odata(f.cod);
  std::vector<LimitOutcome<CokernelCert>> certs;
  for (size_t k = 0; k < len_; ++k) {
    certs.push_back(cokernel(mdata(f).comps[k]));
    if (!certs.back().ok()) {
      return {RuleVerdict::NotRepresentable, std::nullopt,
              "position " + std::to_string(k) + ": " + certs.back().refutation};
    }
  }
  std::vector<Obj> pos;
  std::vector<Mor> proj;
  for (const auto& c : certs) {
    pos.push_back(c.cert->c.cod);
    proj.push_back(c.cert->c);
  }
  std::vector<Mor> ced;
  for (size_t t = 0; t + 1 < len_; ++t) {
    std::optional<Mor> e =
        ascend_ ? certs[t].cert->mediate(base_->compose(proj[t + 1], Y.edges[t]))
                : certs[t + 1].cert->mediate(base_->compose(proj[t], Y.edges[t]));
    if (!e) throw std::logic_error(label_ + ": induced cokernel edge failed to mediate");
    ced.push_back(*e);
  }
  Obj C = make_obj(std::move(pos), std::move(ced));
  return {RuleVerdict::Representable, make_mor(f.cod, C, std::move(proj)), ""};
}

std::optional<bool> DiagramCategory::is_kernel_rule(const Mor& m) const {
  bool all = true;
  for (const Mor& c : mdata(m).comps) {
    auto v = base_->is_kernel_rule(c);
    if (!v) return std::nullopt;
    all = all && *v;
  }
  // A positionwise kernel is the kernel of its assembled cokernel; without
  // that cokernel we cannot conclude and fall back to the bounded search.
  if (!all) return false;
  if (cokernel_rule(m).verdict != RuleVerdict::Representable) return std::nullopt;
  return true;
}

std::optional<bool> DiagramCategory::is_cokernel_rule(const Mor& m) const {
  bool all = true;
  for (const Mor& c : mdata(m).comps) {
    auto v = base_->is_cokernel_rule(c);
    if (!v) return std::nullopt;
    all = all && *v;
  }
  if (!all) return false;
  if (kernel_rule(m).verdict != RuleVerdict::Representable) return std::nullopt;
  return true;
}

ChainCategory::ChainCategory(const Category* base, size_t n)
    : DiagramCategory(base, n, /*ascend=*/true, /*ddzero=*/true, "chain") {}

SpectrumCategory::SpectrumCategory(const Category* base, size_t l)
    : DiagramCategory(base, l, /*ascend=*/false, /*ddzero=*/false, "spectra") {}

Obj concentrated(const ChainCategory& ch, const Obj& x, size_t n) {
  if (n >= ch.length()) throw std::out_of_range("concentrated: degree out of range");
  const Category* base = ch.base();
  std::vector<Obj> pos(ch.length(), base->zero_obj());
  pos[n] = x;
  std::vector<Mor> edges;
  for (size_t t = 0; t + 1 < ch.length(); ++t) edges.push_back(base->zero_mor(pos[t], pos[t + 1]));
  return ch.make_obj(std::move(pos), std::move(edges));
}

Obj constant_spectrum(const SpectrumCategory& sp, const Obj& x) {
  std::vector<Obj> pos(sp.length(), x);
  std::vector<Mor> edges(sp.length() > 0 ? sp.length() - 1 : 0, sp.base()->identity(x));
  return sp.make_obj(std::move(pos), std::move(edges));
}

namespace {

DiagramEquivReport diagram_equiv(const ShortExactSeq& ses, int bound, StabilityContext* ctx,
                                 bool want_ascend, const char* caller) {
  auto* dc = dynamic_cast<const DiagramCategory*>(ses.d.cat());
  if (!dc || dc->edges_ascend() != want_ascend)
    throw std::invalid_argument(std::string(caller) + ": sequence is not over the expected "
                                                      "diagram category");
  DiagramEquivReport r;
  r.instance = dc->name();
  r.bound = bound;
  r.diagram_cert = certify_stable_ses(ses.i, ses.d, bound, ctx);
  r.diagram_stable = r.diagram_cert.stable;
  StabilityContext base_ctx;
  const auto& ic = DiagramCategory::components(ses.i);
  const auto& pc = DiagramCategory::components(ses.d);
  r.componentwise_all = true;
  for (size_t k = 0; k < dc->length(); ++k) {
    StableSesCert c = certify_stable_ses(ic[k], pc[k], bound, &base_ctx);
    r.component_certs.push_back(c);
    r.componentwise.push_back(c.stable);
    r.componentwise_all = r.componentwise_all && c.stable;
  }
  r.agree = (r.diagram_stable == r.componentwise_all);
  return r;
}

}  // namespace

DiagramEquivReport degreewise_stable_equiv(const ShortExactSeq& ses, int bound,
                                           StabilityContext* ctx) {
  return diagram_equiv(ses, bound, ctx, true, "degreewise_stable_equiv");
}

DiagramEquivReport levelwise_stable_equiv(const ShortExactSeq& ses, int bound,
                                          StabilityContext* ctx) {
  return diagram_equiv(ses, bound, ctx, false, "levelwise_stable_equiv");
}

}  // namespace stabex
