// Acceptance suite: runs every criterion at its stated runtime cap and prints
// one pass/fail line per criterion. All arithmetic is exact; the caps are
// wall-clock bounds on commodity hardware. The stretch instance downgrades to
// "skipped" when it exceeds its cap; it never upgrades to "pass".

#include <chrono>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <brpairs/cli.hpp>
#include <brpairs/verify.hpp>

using namespace brpairs;

#ifndef BRPAIRS_REGISTRY_PATH
#define BRPAIRS_REGISTRY_PATH "data/registry.txt"
#endif

namespace {

struct Criterion {
  int id;
  std::string name;
  double cap_seconds;
  bool skip_on_timeout;
  std::function<void()> body;  // throws on failure
};

struct Failure : std::runtime_error {
  explicit Failure(const std::string& msg) : std::runtime_error(msg) {}
};

void expect(bool cond, const std::string& msg) {
  if (!cond)
    throw Failure(msg);
}

void expect_report(const verify::VerificationReport& rep) {
  if (rep.precondition_failed)
    throw Failure(rep.task + " precondition failed: " + rep.precondition_detail);
  for (const auto& c : rep.checks)
    if (!c.pass)
      throw Failure(rep.task + " / " + rep.instance + " check failed: " + c.name +
                    (c.witness.empty() ? "" : " (" + c.witness + ")"));
}

std::string registry_path = BRPAIRS_REGISTRY_PATH;

std::vector<verify::RegistryEntry> registry_with_tag(const std::string& tag) {
  std::vector<verify::RegistryEntry> out;
  for (auto& e : verify::load_registry(registry_path))
    if (e.tag == tag)
      out.push_back(e);
  expect(!out.empty(), "registry has no instances tagged " + tag);
  return out;
}

const char* kC2xS3 = "kind=product,factors=cyclic:2*symmetric:3";

// ---------------------------------------------------------------------------

void criterion1_c2xs3_suite() {
  // the `blocks` command reports B_0 with defect-group order 4
  std::ostringstream out, err;
  int code = cli::main_entry({"blocks", "--group", kC2xS3, "--ell", "2"}, out, err);
  expect(code == 0, "blocks command failed");
  auto j = cli::ordered_json::parse(out.str());
  bool found = false;
  for (auto& b : j["blocks"])
    if (b["principal"] == true) {
      found = true;
      expect(b["defect_order"] == 4, "principal block defect order is not 4");
    }
  expect(found, "no principal block reported");

  auto G = grp::generate_group(kC2xS3);
  pairs::PairEngine eng(alg::splitting_context(G, 2));
  grp::Subgroup whole = grp::whole_group(*G);
  size_t B0 = eng.workspace().algebra(whole).principal_block();

  // the full pair complex is acyclic and carries a join-conical certificate
  pairs::BrauerPoset full = eng.build_poset(whole, B0, pairs::Flavor::full);
  topo::Homology h = topo::homology(topo::order_complex(full.poset), true);
  expect(h.all_zero(), "principal-block complex has nonzero reduced homology");
  grp::Subgroup Z2 = grp::ell_torsion(grp::center(whole), 2);
  auto apex = full.index_of(pairs::BrauerPair{Z2, 0});
  expect(apex.has_value(), "central pair missing from the poset");
  auto cert = topo::conical_via_join(full.poset, *apex);
  expect(cert.has_value(), "no conical certificate via the central pair");

  // the centric subposet complex is exactly 3 isolated vertices
  pairs::BrauerPoset centr = eng.build_poset(whole, B0, pairs::Flavor::centric);
  topo::SimplicialComplex cc = topo::order_complex(centr.poset);
  expect(cc.count(0) == 3 && cc.dim() == 0, "centric complex is not 3 isolated vertices");
}

void criterion2_brown_correspondence() {
  for (auto [spec, ell] :
       std::vector<std::pair<const char*, uint32_t>>{{"kind=perm,n=5,gens=[2,3,1,4,5];[1,2,4,5,3]", 2},
                                                     {"kind=symmetric,n=4", 2},
                                                     {"kind=symmetric,n=4", 3}}) {
    auto G = grp::generate_group(spec);
    pairs::PairEngine eng(alg::splitting_context(G, ell));
    verify::VerificationReport rep;
    rep.task = "brown-correspondence";
    rep.instance = spec;
    verify::check_brown_homeomorphism(eng, grp::whole_group(*G), rep);
    expect_report(rep);
  }
}

void criterion3_block_axioms() {
  for (auto& e : registry_with_tag("fast")) {
    auto G = grp::generate_group(e.group_spec);
    if (G->size() % e.ell != 0)
      continue;
    pairs::PairEngine eng(alg::splitting_context(G, e.ell));
    expect_report(verify::verify_block_axioms(eng, grp::whole_group(*G), e.name, 0x5eed));
  }
}

void criterion4_contractibility_harnesses() {
  for (auto& e : registry_with_tag("fast")) {
    auto G = grp::generate_group(e.group_spec);
    if (G->size() % e.ell != 0)
      continue;
    pairs::PairEngine eng(alg::splitting_context(G, e.ell));
    grp::Subgroup whole = grp::whole_group(*G);
    size_t B0 = eng.workspace().algebra(whole).principal_block();
    for (size_t B : verify::positive_defect_blocks(eng, whole)) {
      expect_report(verify::verify_lemma_abelian(eng, whole, B, e.name));
      bool control = e.group_spec == kC2xS3 && e.ell == 2 && B == B0;
      expect_report(verify::verify_prop_almost_centric(eng, whole, B, e.name, control));
    }
  }
}

void criterion5_defining_characteristic() {
  struct Instance {
    const char* spec;
    size_t positive_blocks;
    std::vector<int64_t> building_betti;
  };
  for (const Instance& inst : {Instance{"kind=SL,n=2,q=4", 1, {4}},
                               Instance{"kind=SL,n=2,q=5", 2, {5}},
                               Instance{"kind=SL,n=3,q=2", 1, {0, 8}}}) {
    red::ReductiveSpec spec = red::ReductiveSpec::parse(inst.spec);
    verify::VerificationReport rep = verify::verify_thm_defining(spec);
    expect_report(rep);
    // pinned values: the count of positive-defect blocks and the building homology
    red::ReductiveGroup rg = red::build_reductive(spec);
    pairs::PairEngine eng(alg::splitting_context(rg.G, spec.p));
    expect(verify::positive_defect_blocks(eng, rg.whole).size() == inst.positive_blocks,
           std::string(inst.spec) + ": wrong number of positive-defect blocks");
    bool saw_building = false;
    for (auto& hr : rep.homology)
      if (hr.complex_name == "tits-building") {
        saw_building = true;
        expect(hr.h.betti == inst.building_betti && hr.h.betti_neg1 == 0,
               std::string(inst.spec) + ": building homology differs from the pinned value");
        for (auto& t : hr.h.torsion)
          expect(t.empty(), "building homology has torsion");
      }
    expect(saw_building, "no building homology recorded");
  }
}

verify::VerificationReport run_theorem_A_instance(const std::string& spec, uint32_t ell) {
  verify::VerificationReport rep =
      verify::verify_theorem_A(red::ReductiveSpec::parse(spec), ell);
  expect_report(rep);
  return rep;
}

void criterion6_theorem_A() {
  run_theorem_A_instance("kind=GL,n=2,q=4", 5);
  run_theorem_A_instance("kind=GL,n=3,q=2", 3);
  run_theorem_A_instance("kind=GL,n=2,q=5", 3);
}

void criterion7_stretch() {
  verify::VerificationReport rep = run_theorem_A_instance("kind=GL,n=4,q=2", 3);
  // rank-2 Sylow: the complexes on both sides are genuinely 1-dimensional
  bool saw_edges = false;
  for (auto& hr : rep.homology)
    if (hr.simplices > hr.vertices)
      saw_edges = true;
  expect(saw_edges, "stretch instance complexes are zero-dimensional");
}

void criterion8_brown_corollary() {
  expect_report(verify::verify_brown_corollary(red::ReductiveSpec::parse("kind=GL,n=2,q=4"), 5));
  expect_report(verify::verify_brown_corollary(red::ReductiveSpec::parse("kind=GL,n=3,q=2"), 3));
}

void criterion9_infrastructure() {
  // the SNF transform identity is verified on every invocation inside
  // smith_normal_form; exercise it over a deterministic matrix sample
  DetRng rng(2026);
  for (int trial = 0; trial < 50; ++trial) {
    topo::IntMat m(2 + rng.below(5), 2 + rng.below(5));
    for (auto& v : m.a)
      v = int64_t(rng.below(21)) - 10;
    topo::smith_normal_form(m);
  }

  // boundary of the n-simplex: a single Z in degree n-1, for n <= 6
  for (uint32_t n = 1; n <= 6; ++n) {
    topo::Homology h = topo::homology(topo::full_simplex_complex(n + 1, false), true);
    std::vector<int64_t> want(n, 0);
    want[n - 1] = 1;
    expect(h.betti == want, "simplex boundary homology wrong at n = " + std::to_string(n));
    for (auto& t : h.torsion)
      expect(t.empty(), "simplex boundary has torsion");
  }

  // cache round-trip byte identity
  auto G = grp::generate_group("kind=symmetric,n=4");
  pairs::PairEngine eng(alg::splitting_context(G, 2));
  pairs::BrauerPoset bp = eng.build_poset(grp::whole_group(*G), 0, pairs::Flavor::full);
  auto payload = cache::serialize_brauer_poset(bp);
  pairs::BrauerPoset back = cache::deserialize_brauer_poset(payload, *G);
  expect(cache::serialize_brauer_poset(back) == payload, "cache round-trip not byte-identical");

  // repeated runs produce byte-identical reports
  for (auto args : std::vector<std::vector<std::string>>{
           {"verify", "axioms", "--group", "kind=symmetric,n=4", "--ell", "2"},
           {"homology", "--group", kC2xS3, "--ell", "2", "--block", "all-positive-defect"}}) {
    std::ostringstream out1, out2, err;
    expect(cli::main_entry(args, out1, err) == 0, "command failed");
    expect(cli::main_entry(args, out2, err) == 0, "command failed on the repeat run");
    expect(out1.str() == out2.str(), "repeated runs are not byte-identical");
  }
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
      only = std::atoi(argv[++i]);
    else if (std::strncmp(argv[i], "--registry=", 11) == 0)
      registry_path = argv[i] + 11;
    else
      registry_path = argv[i];
  }

  std::vector<Criterion> criteria = {
      {1, "C2xS3 suite", 5, false, criterion1_c2xs3_suite},
      {2, "Brown correspondence order isomorphisms", 60, false, criterion2_brown_correspondence},
      {3, "block-axiom property suite", 300, false, criterion3_block_axioms},
      {4, "abelian/almost-centric contractibility", 600, false,
       criterion4_contractibility_harnesses},
      {5, "defining characteristic", 900, false, criterion5_defining_characteristic},
      {6, "Theorem A instances", 3 * 900, false, criterion6_theorem_A},
      {7, "stretch instance GL_4(2) ell=3", 2700, true, criterion7_stretch},
      {8, "Brown-complex corollary", 600, false, criterion8_brown_corollary},
      {9, "infrastructure oracles", 300, false, criterion9_infrastructure},
  };

  bool any_fail = false;
  for (auto& c : criteria) {
    if (only && c.id != only)
      continue;
    auto start = std::chrono::steady_clock::now();
    std::string status, detail;
    try {
      c.body();
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (secs <= c.cap_seconds) {
        status = "PASS";
      } else if (c.skip_on_timeout) {
        status = "SKIPPED";
        detail = "finished correct but over the " + std::to_string(int(c.cap_seconds)) + "s cap";
      } else {
        status = "FAIL";
        detail = "over the " + std::to_string(int(c.cap_seconds)) + "s cap";
        any_fail = true;
      }
    } catch (const std::exception& ex) {
      status = "FAIL";
      detail = ex.what();
      any_fail = true;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d [%s]: %s (%.1fs)%s%s\n", c.id, c.name.c_str(), status.c_str(), secs,
                detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
  }
  return any_fail ? 1 : 0;
}
