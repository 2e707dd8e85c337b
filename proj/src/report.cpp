#include "stabex/report.hpp"

#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "stabex/instances.hpp"
#include "stabex/karoubi.hpp"

namespace stabex {

namespace {

using nlohmann::json;

std::string kind_name(StabilityKind k) {
  return k == StabilityKind::Kernel ? "kernel" : "cokernel";
}

/// Deterministic choice of k subjects: a seeded Fisher-Yates prefix, then
/// sorted back into enumeration order. Independent of platform since the
/// generator's word sequence is fully specified.
std::vector<size_t> sample_indices(size_t n, size_t k, uint64_t seed) {
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < idx.size() && i < k; ++i) {
    size_t j = i + static_cast<size_t>(rng() % (idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(std::min(k, n));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<ShortExactSeq> pick_subjects(std::vector<ShortExactSeq> all, const RunConfig& cfg) {
  if (!cfg.sample) return all;
  std::vector<ShortExactSeq> out;
  for (size_t i : sample_indices(all.size(), static_cast<size_t>(*cfg.sample), *cfg.seed))
    out.push_back(all[i]);
  return out;
}

json config_json(const RunConfig& cfg) {
  json c;
  c["instance"] = cfg.instance;
  c["bound"] = cfg.bound;
  c["oracle_bound"] = cfg.oracle_bound ? json(*cfg.oracle_bound) : json(nullptr);
  c["class"] = cfg.cls;
  c["degrees"] = cfg.degrees;
  c["length"] = cfg.length;
  c["sample"] = cfg.sample ? json(*cfg.sample) : json(nullptr);
  c["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  return c;
}

ConflationClass class_by_name(const std::string& name, int bound) {
  if (name == "split") return split_class();
  if (name == "stable") return stable_class(bound);
  if (name == "all-kcp") return all_kcp_class();
  if (name == "empty") return empty_class();  // negative control: fails the zero-sequence axiom
  throw std::invalid_argument("unknown conflation class \"" + name +
                              "\" (expected split, stable, all-kcp or empty)");
}

void run_axioms(const Category& cat, const RunConfig& cfg, RunResult& res) {
  AxiomReport r = axiom_suite(cat, class_by_name(cfg.cls, cfg.bound), cfg.bound);
  res.report["payload"] = axiom_report_json(r);
  res.pass = r.all_pass();
  int failing = 0;
  for (const auto& o : r.outcomes) failing += o.pass ? 0 : 1;
  res.summary = "axioms " + cfg.instance + " class=" + cfg.cls + " bound=" +
                std::to_string(cfg.bound) + ": " + std::to_string(r.outcomes.size()) +
                " axioms, " +
                (failing ? std::to_string(failing) + " failing" : std::string("all pass"));
}

void run_classify(const Category& cat, const RunConfig& cfg, RunResult& res) {
  auto subjects = pick_subjects(conflations_in(cat, all_kcp_class(), cfg.bound, true), cfg);
  StabilityContext ctx;
  json recs = json::array();
  int stable_count = 0;
  for (const ShortExactSeq& s : subjects) {
    if (cfg.oracle_bound) {
      // Re-derive both halves under oracle supervision; disagreements throw.
      kernel(s.d, *cfg.oracle_bound);
      cokernel(s.i, *cfg.oracle_bound);
    }
    StableSesCert c = certify_stable_ses(s.i, s.d, cfg.bound, &ctx);
    stable_count += c.stable ? 1 : 0;
    json r;
    r["i"] = cat.mor_key(s.i);
    r["d"] = cat.mor_key(s.d);
    r["stable"] = c.stable;
    r["kernel"] = verdict_json(c.kernel_verdict);
    r["cokernel"] = verdict_json(c.cokernel_verdict);
    recs.push_back(std::move(r));
  }
  json payload;
  payload["instance"] = cat.name();
  payload["bound"] = cfg.bound;
  payload["total"] = subjects.size();
  payload["stable_count"] = stable_count;
  payload["records"] = std::move(recs);
  res.report["payload"] = std::move(payload);
  res.pass = stable_count == static_cast<int>(subjects.size());
  res.summary = "classify " + cfg.instance + " bound=" + std::to_string(cfg.bound) + ": " +
                std::to_string(subjects.size()) + " pairs, " + std::to_string(stable_count) +
                " stable";
}

void run_karoubi(const Category& cat, const RunConfig& cfg, RunResult& res) {
  const KaroubiCategory& K = completion_of(cat);
  StabilityContext ctx;
  int total = 0, agreements = 0;
  json disagreements = json::array();
  for (const Obj& b : cat.objects(cfg.bound)) {
    for (const Obj& c : cat.objects(cfg.bound)) {
      for (const Mor& m : cat.hom(b, c)) {
        if (!is_cokernel_mor(m, cfg.bound)) continue;
        TransferReport rep = transfer_semistable(K, m, cfg.bound, &ctx);
        ++total;
        if (rep.agree) {
          ++agreements;
        } else {
          disagreements.push_back(cat.mor_key(m));
        }
      }
    }
  }
  json census = json::array();
  for (const Obj& x : K.objects(1)) {
    auto w = in_essential_image(K, x, 2 * std::max(cfg.bound, 1));
    json e;
    e["object"] = K.obj_key(x);
    e["in_image"] = w.has_value();
    e["witness"] = w ? json(cat.obj_key(w->base)) : json(nullptr);
    census.push_back(std::move(e));
  }
  size_t census_size = census.size();
  json payload;
  payload["instance"] = cat.name();
  payload["completion"] = K.name();
  payload["bound"] = cfg.bound;
  payload["transfer"] = {{"total", total},
                         {"agreements", agreements},
                         {"all_agree", total == agreements},
                         {"disagreements", std::move(disagreements)}};
  payload["census"] = std::move(census);
  res.report["payload"] = std::move(payload);
  res.pass = total == agreements;
  res.summary = "karoubi " + cfg.instance + " bound=" + std::to_string(cfg.bound) +
                ": transfer " + std::to_string(agreements) + "/" + std::to_string(total) +
                " agree, census " + std::to_string(census_size) + " objects";
}

void run_diagram(const Category& base, const RunConfig& cfg, RunResult& res, bool chain) {
  if ((chain ? cfg.degrees : cfg.length) < 1)
    throw std::invalid_argument(chain ? "--degrees must be >= 1" : "--length must be >= 1");
  ChainCategory ch(&base, static_cast<size_t>(cfg.degrees));
  SpectrumCategory sp(&base, static_cast<size_t>(cfg.length));
  const DiagramCategory& dc = chain ? static_cast<const DiagramCategory&>(ch)
                                    : static_cast<const DiagramCategory&>(sp);
  auto subjects = pick_subjects(conflations_in(dc, all_kcp_class(), cfg.bound, true), cfg);
  StabilityContext ctx;
  json recs = json::array();
  int agreements = 0;
  for (const ShortExactSeq& s : subjects) {
    DiagramEquivReport r = chain ? degreewise_stable_equiv(s, cfg.bound, &ctx)
                                 : levelwise_stable_equiv(s, cfg.bound, &ctx);
    agreements += r.agree ? 1 : 0;
    recs.push_back(equiv_report_json(r));
  }
  json payload;
  payload["instance"] = dc.name();
  payload["bound"] = cfg.bound;
  payload["total"] = subjects.size();
  payload["agreements"] = agreements;
  payload["all_agree"] = agreements == static_cast<int>(subjects.size());
  payload["records"] = std::move(recs);
  res.report["payload"] = std::move(payload);
  res.pass = agreements == static_cast<int>(subjects.size());
  res.summary = std::string(chain ? "chain " : "spectra ") + cfg.instance + " bound=" +
                std::to_string(cfg.bound) + ": " + std::to_string(subjects.size()) +
                " sequences, " + std::to_string(agreements) + " agree";
}

}  // namespace

nlohmann::json axiom_report_json(const AxiomReport& r) {
  json outcomes = json::array();
  for (const auto& o : r.outcomes) {
    json j;
    j["axiom"] = o.axiom;
    j["pass"] = o.pass;
    j["cases"] = o.cases;
    j["detail"] = o.detail;
    j["witness"] = o.witness ? json(o.witness->cat()->mor_key(*o.witness)) : json(nullptr);
    outcomes.push_back(std::move(j));
  }
  json j;
  j["instance"] = r.instance;
  j["class"] = r.class_name;
  j["bound"] = r.bound;
  j["all_pass"] = r.all_pass();
  j["outcomes"] = std::move(outcomes);
  return j;
}

nlohmann::json verdict_json(const SemiStableVerdict& v) {
  json j;
  j["kind"] = kind_name(v.kind);
  j["subject"] = v.subject.cat()->mor_key(v.subject);
  j["certified"] = v.certified;
  j["bound"] = v.bound;
  j["class"] = v.class_name;
  j["witness"] = v.witness ? json(v.witness->cat()->mor_key(*v.witness)) : json(nullptr);
  j["failure"] = v.failure;
  return j;
}

nlohmann::json classify_record_json(const ClassifyRecord& r) {
  json j;
  j["i"] = r.i.cat()->mor_key(r.i);
  j["d"] = r.d.cat()->mor_key(r.d);
  j["stable"] = r.stable;
  j["kernel"] = verdict_json(r.kernel_verdict);
  j["cokernel"] = verdict_json(r.cokernel_verdict);
  return j;
}

nlohmann::json equiv_report_json(const DiagramEquivReport& r) {
  json j;
  j["instance"] = r.instance;
  j["bound"] = r.bound;
  j["d"] = r.diagram_cert.d.cat()->mor_key(r.diagram_cert.d);
  j["diagram_stable"] = r.diagram_stable;
  j["componentwise"] = r.componentwise;
  j["componentwise_all"] = r.componentwise_all;
  j["agree"] = r.agree;
  return j;
}

RunResult run_command(const RunConfig& cfg) {
  if (cfg.bound < 0) throw std::invalid_argument("--bound must be >= 0");
  if (cfg.sample && !cfg.seed) throw std::invalid_argument("--sample requires --seed");
  const Category& cat = instance_from_descriptor(cfg.instance);

  RunResult res;
  res.report["schema"] = "stabex-report/1";
  res.report["version"] = "0.1.0";
  res.report["command"] = cfg.command;
  res.report["config"] = config_json(cfg);

  if (cfg.command == "axioms") {
    run_axioms(cat, cfg, res);
  } else if (cfg.command == "classify") {
    run_classify(cat, cfg, res);
  } else if (cfg.command == "karoubi") {
    run_karoubi(cat, cfg, res);
  } else if (cfg.command == "chain") {
    run_diagram(cat, cfg, res, true);
  } else if (cfg.command == "spectra") {
    run_diagram(cat, cfg, res, false);
  } else {
    throw std::invalid_argument("unknown command \"" + cfg.command + "\"");
  }
  res.report["pass"] = res.pass;
  return res;
}

}  // namespace stabex
