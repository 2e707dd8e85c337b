#include "stabex/category.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stabex {

bool obj_equal(const Obj& a, const Obj& b) {
  if (a.cat != b.cat) return false;
  return a.cat->obj_eq(a, b);
}

bool mor_equal(const Mor& f, const Mor& g) {
  if (f.cat() != g.cat()) return false;
  return f.cat()->mor_eq(f, g);
}

bool Category::obj_eq(const Obj& a, const Obj& b) const {
  return obj_key(a) == obj_key(b);
}

bool Category::mor_eq(const Mor& f, const Mor& g) const {
  if (!obj_eq(f.dom, g.dom) || !obj_eq(f.cod, g.cod)) return false;
  return flatten(f) == flatten(g);
}

std::string Category::mor_key(const Mor& m) const {
  std::ostringstream os;
  os << obj_key(m.dom) << "->" << obj_key(m.cod) << ':';
  for (uint32_t v : flatten(m)) os << v << ',';
  return os.str();
}

bool Category::is_zero_mor(const Mor& m) const {
  return mor_eq(m, zero_mor(m.dom, m.cod));
}

bool Category::is_identity(const Mor& m) const {
  if (!obj_eq(m.dom, m.cod)) return false;
  return mor_eq(m, identity(m.dom));
}

Mor Category::block_row(const Mor& f, const Mor& g) const {
  BiproductCert bp = biproduct(f.dom, g.dom);
  return add(compose(f, bp.proj1), compose(g, bp.proj2));
}

Mor Category::block_col(const Mor& f, const Mor& g) const {
  BiproductCert bp = biproduct(f.cod, g.cod);
  return add(compose(bp.inj1, f), compose(bp.inj2, g));
}

Mor Category::diag_mor(const Mor& f, const Mor& g) const {
  BiproductCert dom_bp = biproduct(f.dom, g.dom);
  BiproductCert cod_bp = biproduct(f.cod, g.cod);
  return add(compose(cod_bp.inj1, compose(f, dom_bp.proj1)),
             compose(cod_bp.inj2, compose(g, dom_bp.proj2)));
}

const std::vector<Mor>& Category::hom(const Obj& a, const Obj& b) const {
  std::string key = obj_key(a) + "|" + obj_key(b);
  {
    std::lock_guard<std::mutex> lk(cache_mu_);
    auto it = hom_cache_.find(key);
    if (it != hom_cache_.end()) return it->second;
  }
  std::vector<Mor> all = enumerate_hom(a, b);
  std::lock_guard<std::mutex> lk(cache_mu_);
  return hom_cache_.emplace(key, std::move(all)).first->second;
}

std::vector<Mor> Category::enumerate_hom(const Obj& a, const Obj& b) const {
  // Close the generator span: coordinate vectors of all Z/n combinations,
  // collected in sorted order for determinism.
  std::vector<Mor> gens = hom_generators(a, b);
  size_t len = flat_len(a, b);
  uint32_t n = modulus();
  std::set<std::vector<uint32_t>> seen;
  seen.insert(std::vector<uint32_t>(len, 0));
  std::vector<std::vector<uint32_t>> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<std::vector<uint32_t>> next;
    for (const auto& v : frontier) {
      for (const Mor& g : gens) {
        std::vector<uint32_t> gv = flatten(g);
        std::vector<uint32_t> w(len);
        for (size_t i = 0; i < len; ++i) w[i] = (v[i] + gv[i]) % n;
        if (seen.insert(w).second) next.push_back(std::move(w));
      }
    }
    frontier = std::move(next);
  }
  std::vector<Mor> out;
  out.reserve(seen.size());
  for (const auto& v : seen) out.push_back(unflatten(a, b, v));
  return out;
}

Mor hom_combination(const Obj& a, const Obj& b, const std::vector<Mor>& gens,
                    const std::vector<uint32_t>& coeffs) {
  const Category* cat = a.cat;
  size_t len = cat->flat_len(a, b);
  uint32_t n = cat->modulus();
  std::vector<uint32_t> acc(len, 0);
  for (size_t i = 0; i < gens.size(); ++i) {
    std::vector<uint32_t> gv = cat->flatten(gens[i]);
    for (size_t j = 0; j < len; ++j)
      acc[j] = (acc[j] + uint64_t(coeffs[i]) * gv[j]) % n;
  }
  return cat->unflatten(a, b, acc);
}

namespace {

// Common core: given candidate morphisms cand[i] whose image under `apply`
// should combine to `target`, solve the Z/n linear system and return the
// combination of cand.
std::optional<Mor> solve_combination(const Obj& a, const Obj& b,
                                     const std::vector<Mor>& cand,
                                     const std::vector<std::vector<uint32_t>>& images,
                                     const std::vector<uint32_t>& target,
                                     uint32_t n) {
  size_t len = target.size();
  Matrix sys(cand.size(), len, n);
  for (size_t i = 0; i < cand.size(); ++i)
    for (size_t j = 0; j < len; ++j) sys.at(i, j) = images[i][j];
  auto coeffs = solve_left(sys, target);
  if (!coeffs) return std::nullopt;
  return hom_combination(a, b, cand, *coeffs);
}

}  // namespace

std::optional<Mor> solve_post(const Mor& k, const Mor& t) {
  const Category* cat = k.cat();
  const Obj& src = t.dom;
  std::vector<Mor> gens = cat->hom_generators(src, k.dom);
  std::vector<std::vector<uint32_t>> images;
  images.reserve(gens.size());
  for (const Mor& g : gens) images.push_back(cat->flatten(cat->compose(k, g)));
  return solve_combination(src, k.dom, gens, images, cat->flatten(t), cat->modulus());
}

std::optional<Mor> solve_pre(const Mor& c, const Mor& t) {
  const Category* cat = c.cat();
  const Obj& dst = t.cod;
  std::vector<Mor> gens = cat->hom_generators(c.cod, dst);
  std::vector<std::vector<uint32_t>> images;
  images.reserve(gens.size());
  for (const Mor& g : gens) images.push_back(cat->flatten(cat->compose(g, c)));
  return solve_combination(c.cod, dst, gens, images, cat->flatten(t), cat->modulus());
}

std::optional<Mor> find_inverse(const Mor& f) {
  const Category* cat = f.cat();
  auto g = solve_post(f, cat->identity(f.cod));  // f . g = 1_cod
  if (!g) return std::nullopt;
  // If f is invertible then every right inverse is the two-sided inverse.
  if (!cat->mor_eq(cat->compose(*g, f), cat->identity(f.dom))) return std::nullopt;
  return g;
}

ObjectClass all_objects_class() {
  return ObjectClass{"all", [](const Obj&) { return true; }, false};
}

}  // namespace stabex
