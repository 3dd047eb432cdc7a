#pragma once

// Command-line front end: configuration parsing, command dispatch, report
// emission (JSON and text) and the on-disk poset cache.
//
// Exit-code contract, stable for scripting: 0 = pass, 1 = verified failure,
// 2 = usage error, cap exceeded, or precondition not applicable.
//
// Reports are byte-deterministic for fixed inputs and version: timing_ms is
// emitted as 0 unless --emit-timing is given (wall-clock values are not
// reproducible, so they are opt-in).

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cache.hpp"
#include "common.hpp"
#include "esplit.hpp"
#include "pairs.hpp"
#include "reductive.hpp"
#include "verify.hpp"

namespace brpairs {
namespace cli {

using ordered_json = nlohmann::ordered_json;

struct UsageError : Error {
  explicit UsageError(const std::string& msg) : Error(msg) {}
};

struct RunConfig {
  std::string command;       // blocks | brauer-poset | esplit-poset | homology | building | verify
  std::string verify_task;   // axioms | lemma-ab | prop-ac | defining | theorem-a | brown
  std::string group;
  uint32_t ell = 0;
  std::string block_selector = "principal";  // principal | all-positive-defect | <index>
  std::string flavor = "full";
  std::string format = "json";
  std::string cache_dir;
  std::string output;  // empty: stdout
  uint64_t max_group_order = grp::kDefaultGroupCap;
  uint64_t fiber_cutoff = 200;
  uint64_t seed = 0x5eed;
  unsigned threads = 1;
  bool emit_timing = false;
  bool centric_control = false;
};

inline pairs::Flavor parse_flavor(const std::string& s) {
  if (s == "full")
    return pairs::Flavor::full;
  if (s == "abelian")
    return pairs::Flavor::abelian;
  if (s == "elementary-abelian")
    return pairs::Flavor::elem_abelian;
  if (s == "almost-centric")
    return pairs::Flavor::almost_centric;
  if (s == "abelian-almost-centric")
    return pairs::Flavor::abelian_almost_centric;
  if (s == "centric")
    return pairs::Flavor::centric;
  throw UsageError("unknown flavor: " + s);
}

// --- configuration parsing (plain argv; optional key=value config file) ---

inline RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  if (const char* env = std::getenv("BRPAIRS_CACHE_DIR"))
    cfg.cache_dir = env;

  std::vector<std::pair<std::string, std::string>> kv;  // collected options
  std::vector<std::string> positional;
  for (size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0) {
      std::string key = a.substr(2), val;
      size_t eq = key.find('=');
      if (eq != std::string::npos) {
        val = key.substr(eq + 1);
        key = key.substr(0, eq);
      } else if (key == "emit-timing" || key == "centric-control" || key == "help") {
        val = "true";
      } else {
        if (i + 1 >= args.size())
          throw UsageError("flag --" + key + " needs a value");
        val = args[++i];
      }
      kv.emplace_back(key, val);
    } else {
      positional.push_back(a);
    }
  }
  if (positional.empty())
    throw UsageError("no command given (blocks, brauer-poset, esplit-poset, homology, building, verify)");
  cfg.command = positional[0];
  static const std::set<std::string> commands = {"blocks",   "brauer-poset", "esplit-poset",
                                                 "homology", "building",     "verify"};
  if (!commands.count(cfg.command))
    throw UsageError("unknown command: " + cfg.command);
  if (cfg.command == "verify") {
    if (positional.size() < 2)
      throw UsageError("verify needs a task: axioms, lemma-ab, prop-ac, defining, theorem-a, brown");
    cfg.verify_task = positional[1];
    static const std::set<std::string> tasks = {"axioms",   "lemma-ab",  "prop-ac",
                                                "defining", "theorem-a", "brown"};
    if (!tasks.count(cfg.verify_task))
      throw UsageError("unknown verify task: " + cfg.verify_task);
    if (positional.size() > 2)
      throw UsageError("unexpected argument: " + positional[2]);
  } else if (positional.size() > 1) {
    throw UsageError("unexpected argument: " + positional[1]);
  }

  // config file first, then flags override
  std::vector<std::pair<std::string, std::string>> merged;
  for (auto& [k, v] : kv)
    if (k == "config") {
      std::ifstream in(v);
      if (!in)
        throw UsageError("cannot open config file: " + v);
      std::string line;
      while (std::getline(in, line)) {
        std::string s = grp::detail::strip(line);
        if (s.empty() || s[0] == '#')
          continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
          throw UsageError("config line is not key = value: " + line);
        merged.emplace_back(grp::detail::strip(s.substr(0, eq)),
                            grp::detail::strip(s.substr(eq + 1)));
      }
    }
  for (auto& [k, v] : kv)
    if (k != "config")
      merged.emplace_back(k, v);

  for (auto& [key, val] : merged) {
    try {
      if (key == "group")
        cfg.group = val;
      else if (key == "ell")
        cfg.ell = uint32_t(std::stoul(val));
      else if (key == "block")
        cfg.block_selector = val;
      else if (key == "flavor")
        cfg.flavor = val;
      else if (key == "format")
        cfg.format = val;
      else if (key == "cache-dir")
        cfg.cache_dir = val;
      else if (key == "output")
        cfg.output = val;
      else if (key == "max-group-order")
        cfg.max_group_order = std::stoull(val);
      else if (key == "fiber-cutoff")
        cfg.fiber_cutoff = std::stoull(val);
      else if (key == "seed")
        cfg.seed = std::stoull(val);
      else if (key == "threads")
        cfg.threads = unsigned(std::stoul(val));
      else if (key == "emit-timing")
        cfg.emit_timing = val == "true";
      else if (key == "centric-control")
        cfg.centric_control = val == "true";
      else if (key == "help")
        throw UsageError("usage: brpairs <command> [--group SPEC] [--ell L] [options]");
      else
        throw UsageError("unknown flag: --" + key);
    } catch (const std::invalid_argument&) {
      throw UsageError("flag --" + key + " has a malformed value: " + val);
    } catch (const std::out_of_range&) {
      throw UsageError("flag --" + key + " has an out-of-range value: " + val);
    }
  }

  if (cfg.format != "json" && cfg.format != "text")
    throw UsageError("unknown format: " + cfg.format);
  if (cfg.threads < 1)
    throw UsageError("--threads must be at least 1");
  if (cfg.command != "building" && cfg.ell == 0)
    throw UsageError("--ell is required");
  if (cfg.ell && !is_prime_u64(cfg.ell))
    throw UsageError("--ell must be prime, got " + std::to_string(cfg.ell));
  if (cfg.group.empty())
    throw UsageError("--group is required");
  parse_flavor(cfg.flavor);
  return cfg;
}

// --- report emission ---

// Reports carry unreduced Betti numbers (internal equality checks use the
// reduced groups; the two determine each other for nonempty complexes).
inline ordered_json betti_json(const topo::Homology& h, size_t vertices) {
  ordered_json betti = ordered_json::array();
  for (size_t i = 0; i < h.betti.size(); ++i) {
    int64_t b = h.betti[i];
    if (i == 0 && h.reduced && vertices > 0)
      b += 1;
    betti.push_back(b);
  }
  if (h.betti.empty() && h.reduced && vertices > 0)
    betti.push_back(1);  // a nonempty acyclic complex still has H_0 = Z
  return betti;
}

inline ordered_json homology_json(const verify::VerificationReport& rep) {
  ordered_json arr = ordered_json::array();
  for (const auto& hr : rep.homology) {
    ordered_json h;
    h["name"] = hr.complex_name;
    h["betti"] = betti_json(hr.h, hr.vertices);
    ordered_json tor = ordered_json::array();
    for (const auto& t : hr.h.torsion)
      tor.push_back(t);
    h["torsion"] = tor;
    h["vertices"] = hr.vertices;
    h["simplices"] = hr.simplices;
    arr.push_back(h);
  }
  return arr;
}

inline ordered_json report_json(const verify::VerificationReport& rep) {
  ordered_json j;
  j["task"] = rep.task;
  j["instance"] = rep.instance;
  j["pass"] = rep.pass();
  if (rep.precondition_failed)
    j["precondition"] = rep.precondition_detail;
  ordered_json checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    if (!c.witness.empty())
      cj["witness"] = c.witness;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["homology"] = ordered_json{{"complex", homology_json(rep)}};
  j["timing_ms"] = rep.timing_ms;
  j["version"] = kVersion;
  return j;
}

inline std::string report_text(const verify::VerificationReport& rep) {
  std::ostringstream os;
  os << "task: " << rep.task << "\ninstance: " << rep.instance << "\n";
  if (rep.precondition_failed)
    os << "precondition not applicable: " << rep.precondition_detail << "\n";
  for (const auto& c : rep.checks) {
    os << (c.pass ? "  [pass] " : "  [FAIL] ") << c.name;
    if (!c.witness.empty())
      os << "  (" << c.witness << ")";
    os << "\n";
  }
  for (const auto& hr : rep.homology)
    os << "  homology " << hr.complex_name << ": " << hr.h.to_string() << " ("
       << hr.vertices << " vertices, " << hr.simplices << " simplices)\n";
  os << "overall: " << (rep.pass() ? "PASS" : "FAIL") << "\n";
  os << "timing_ms: " << rep.timing_ms << "\nversion: " << kVersion << "\n";
  return os.str();
}

inline void emit_report(const verify::VerificationReport& rep, const RunConfig& cfg,
                        std::ostream& out) {
  if (cfg.format == "json")
    out << report_json(rep).dump(2) << "\n";
  else
    out << report_text(rep);
}

// --- command implementations ---

namespace detail {

inline std::vector<size_t> select_blocks(const RunConfig& cfg, pairs::PairEngine& eng,
                                         const grp::Subgroup& whole) {
  const alg::SubgroupAlgebra& A = eng.workspace().algebra(whole);
  if (cfg.block_selector == "principal")
    return {A.principal_block()};
  if (cfg.block_selector == "all-positive-defect")
    return verify::positive_defect_blocks(eng, whole);
  try {
    size_t idx = std::stoul(cfg.block_selector);
    if (idx >= A.blocks.size())
      throw UsageError("block index out of range (the algebra has " +
                       std::to_string(A.blocks.size()) + " blocks)");
    return {idx};
  } catch (const std::invalid_argument&) {
    throw UsageError("block selector must be principal, all-positive-defect, or an index");
  }
}

inline std::string instance_string(const RunConfig& cfg) {
  return grp::parse_group_spec(cfg.group).canonical() + " ell=" + std::to_string(cfg.ell);
}

}  // namespace detail

// returns the process exit code (0 pass, 1 verified failure, 2 usage)
inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto started = std::chrono::steady_clock::now();
  auto elapsed_ms = [&]() {
    return cfg.emit_timing
               ? std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - started)
                     .count()
               : 0;
  };
  auto finish = [&](verify::VerificationReport rep) {
    rep.timing_ms = elapsed_ms();
    emit_report(rep, cfg, out);
    if (rep.precondition_failed)
      return 2;
    return rep.pass() ? 0 : 1;
  };
  auto emit_data = [&](ordered_json j, const std::string& text) {
    j["timing_ms"] = elapsed_ms();
    j["version"] = kVersion;
    if (cfg.format == "json")
      out << j.dump(2) << "\n";
    else
      out << text;
    return 0;
  };

  if (cfg.command == "building") {
    red::ReductiveGroup rg =
        red::build_reductive(red::ReductiveSpec::parse(cfg.group), cfg.max_group_order);
    red::ParabolicData pd = red::parabolic_poset(rg);
    topo::SimplicialComplex b = red::tits_building(pd);
    topo::Homology h = topo::homology(b, true);
    ordered_json j;
    j["task"] = "building";
    j["instance"] = rg.spec.describe();
    j["parabolics"] = pd.flags.size();
    ordered_json tor = ordered_json::array();
    for (auto& t : h.torsion)
      tor.push_back(t);
    j["homology"] = ordered_json{{"complex", ordered_json::array({ordered_json{
                                     {"name", "tits-building"},
                                     {"betti", betti_json(h, b.count(0))},
                                     {"torsion", tor},
                                     {"vertices", b.count(0)},
                                     {"simplices", b.total()}}})}};
    std::ostringstream text;
    text << "building of " << rg.spec.describe() << ": " << pd.flags.size()
         << " parabolics, reduced " << h.to_string() << "\n";
    return emit_data(j, text.str());
  }

  auto G = grp::generate_group(cfg.group, cfg.max_group_order);
  pairs::PairEngine eng(alg::splitting_context(G, cfg.ell));
  if (!cfg.cache_dir.empty())
    eng.enable_cache(cfg.cache_dir, G->spec, &err);
  grp::Subgroup whole = grp::whole_group(*G);
  std::string instance = detail::instance_string(cfg);

  if (cfg.command == "blocks") {
    const alg::SubgroupAlgebra& A = eng.workspace().algebra(whole);
    ordered_json j;
    j["task"] = "blocks";
    j["instance"] = instance;
    j["field"] = eng.workspace().field().describe();
    ordered_json blocks = ordered_json::array();
    std::ostringstream text;
    text << instance << ": " << A.blocks.size() << " blocks over "
         << eng.workspace().field().describe() << "\n";
    for (size_t b = 0; b < A.blocks.size(); ++b) {
      uint64_t d = eng.defect_group_of_block(whole, b).order();
      // sparse class-coefficient list: the canonical idempotent serialization
      ordered_json coeffs = ordered_json::array();
      for (size_t i = 0; i < A.nclasses; ++i)
        if (A.blocks[b][i])
          coeffs.push_back(ordered_json::array({i, A.blocks[b][i]}));
      blocks.push_back(ordered_json{{"index", b},
                                    {"principal", b == A.principal_block()},
                                    {"defect_order", d},
                                    {"coefficients", coeffs}});
      text << "  block " << b << (b == A.principal_block() ? " (principal)" : "")
           << ": defect order " << d << "\n";
    }
    j["blocks"] = blocks;
    return emit_data(j, text.str());
  }

  if (cfg.command == "brauer-poset" || cfg.command == "homology") {
    pairs::Flavor flavor = parse_flavor(cfg.flavor);
    ordered_json complexes = ordered_json::array();
    ordered_json posets = ordered_json::array();
    std::ostringstream text;
    for (size_t B : detail::select_blocks(cfg, eng, whole)) {
      pairs::BrauerPoset bp =
          cache::build_brauer_poset_cached(eng, whole, B, flavor, cfg.threads);
      if (cfg.command == "brauer-poset") {
        ordered_json pj;
        pj["block"] = B;
        pj["flavor"] = pairs::flavor_name(flavor);
        pj["vertices"] = bp.pairs.size();
        ordered_json vs = ordered_json::array();
        for (auto& p : bp.pairs)
          vs.push_back(ordered_json{{"subgroup_order", p.Q.order()}, {"block", p.block}});
        pj["pairs"] = vs;
        posets.push_back(pj);
        text << instance << " block " << B << " (" << pairs::flavor_name(flavor)
             << "): " << bp.pairs.size() << " pairs\n";
      } else {
        topo::SimplicialComplex c = topo::order_complex(bp.poset);
        topo::Homology h = topo::homology(c, true);
        ordered_json tor = ordered_json::array();
        for (auto& t : h.torsion)
          tor.push_back(t);
        complexes.push_back(ordered_json{{"name", "block-" + std::to_string(B)},
                                         {"betti", betti_json(h, c.count(0))},
                                         {"torsion", tor},
                                         {"vertices", c.count(0)},
                                         {"simplices", c.total()}});
        text << instance << " block " << B << ": " << h.to_string() << "\n";
      }
    }
    ordered_json j;
    j["task"] = cfg.command;
    j["instance"] = instance;
    if (cfg.command == "brauer-poset")
      j["posets"] = posets;
    else
      j["homology"] = ordered_json{{"complex", complexes}};
    return emit_data(j, text.str());
  }

  if (cfg.command == "esplit-poset") {
    red::ReductiveSpec spec = red::ReductiveSpec::parse(cfg.group);
    red::PrimeContext pc = red::prime_context(spec, cfg.ell);
    red::ReductiveGroup rg;
    rg.spec = spec;
    rg.G = G;
    rg.whole = whole;
    rg.Fq = G->field;
    check(G->size() == spec.group_order(), "group size mismatch");
    esplit::EsplitEngine es(eng, rg, pc.e);
    ordered_json posets = ordered_json::array();
    std::ostringstream text;
    for (size_t B : detail::select_blocks(cfg, eng, whole)) {
      esplit::EsplitPoset ep = cache::build_esplit_poset_cached(es, B, cfg.threads);
      ordered_json pj;
      pj["block"] = B;
      pj["e"] = pc.e;
      pj["vertices"] = ep.pairs.size();
      pj["excluded_levis"] = ep.excluded_levis.size();
      ordered_json vs = ordered_json::array();
      for (auto& p : ep.pairs)
        vs.push_back(ordered_json{{"levi_type", es.levis()[p.levi].type.describe()},
                                  {"levi_order", es.levis()[p.levi].sub.order()},
                                  {"block", p.block}});
      pj["pairs"] = vs;
      posets.push_back(pj);
      text << instance << " block " << B << ": " << ep.pairs.size() << " e-split pairs (e="
           << pc.e << ")\n";
    }
    ordered_json j;
    j["task"] = "esplit-poset";
    j["instance"] = instance;
    j["posets"] = posets;
    return emit_data(j, text.str());
  }

  // verify tasks
  if (cfg.verify_task == "axioms")
    return finish(verify::verify_block_axioms(eng, whole, instance, cfg.seed, cfg.threads));

  if (cfg.verify_task == "lemma-ab" || cfg.verify_task == "prop-ac") {
    std::vector<size_t> blocks = detail::select_blocks(cfg, eng, whole);
    verify::VerificationReport merged;
    merged.task = cfg.verify_task == "lemma-ab" ? "lemma-abelian" : "prop-almost-centric";
    merged.instance = instance;
    for (size_t B : blocks) {
      // the centric negative control is the principal-block phenomenon
      bool control = cfg.centric_control && B == eng.workspace().algebra(whole).principal_block();
      verify::VerificationReport rep =
          cfg.verify_task == "lemma-ab"
              ? verify::verify_lemma_abelian(eng, whole, B, instance, cfg.threads,
                                             cfg.fiber_cutoff)
              : verify::verify_prop_almost_centric(eng, whole, B, instance, control,
                                                   cfg.threads);
      std::string prefix = "b" + std::to_string(B) + ":";
      for (auto& c : rep.checks)
        merged.checks.push_back(verify::Check{prefix + c.name, c.pass, c.witness});
      for (auto& h : rep.homology) {
        h.complex_name = prefix + h.complex_name;
        merged.homology.push_back(h);
      }
    }
    return finish(std::move(merged));
  }

  if (cfg.verify_task == "defining") {
    red::ReductiveSpec spec = red::ReductiveSpec::parse(cfg.group);
    if (cfg.ell != spec.p)
      throw UsageError("defining-characteristic verification needs --ell equal to p = " +
                       std::to_string(spec.p));
    return finish(verify::verify_thm_defining(spec, cfg.max_group_order, cfg.threads));
  }
  if (cfg.verify_task == "theorem-a")
    return finish(verify::verify_theorem_A(red::ReductiveSpec::parse(cfg.group), cfg.ell,
                                           cfg.max_group_order, cfg.threads, cfg.fiber_cutoff,
                                           cfg.cache_dir));
  if (cfg.verify_task == "brown")
    return finish(verify::verify_brown_corollary(red::ReductiveSpec::parse(cfg.group), cfg.ell,
                                                 cfg.max_group_order, cfg.threads,
                                                 cfg.cache_dir));
  throw UsageError("unhandled command: " + cfg.command);
}

// full entry point used by the binary: parses, runs, maps errors to exit codes
inline int main_entry(const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& err) {
  try {
    RunConfig cfg = parse_config(args);
    if (!cfg.output.empty()) {
      std::ofstream file(cfg.output, std::ios::trunc);
      if (!file)
        throw UsageError("cannot open output file: " + cfg.output);
      return run_command(cfg, file, err);
    }
    return run_command(cfg, out, err);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return 2;
  } catch (const ContractViolation& ex) {
    err << "verified failure: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  }
}

}  // namespace cli
}  // namespace brpairs
