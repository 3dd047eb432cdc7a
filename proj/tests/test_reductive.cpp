#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <brpairs/reductive.hpp>

using namespace brpairs;
using namespace brpairs::red;

TEST_CASE("build_reductive: orders and centers") {
  ReductiveGroup gl24 = build_reductive(ReductiveSpec::parse("kind=GL,n=2,q=4"));
  CHECK(gl24.G->size() == 180);
  ReductiveGroup sl32 = build_reductive(ReductiveSpec::parse("kind=SL,n=3,q=2"));
  CHECK(sl32.G->size() == 168);
  ReductiveGroup sl25 = build_reductive(ReductiveSpec::parse("kind=SL,n=2,q=5"));
  CHECK(sl25.G->size() == 120);
  CHECK(grp::center(sl25.whole).order() == 2);
}

TEST_CASE("parabolic posets and buildings") {
  // SL_2(5): the building is q+1 = 6 points
  ReductiveGroup sl25 = build_reductive(ReductiveSpec::parse("kind=SL,n=2,q=5"));
  ParabolicData pd = parabolic_poset(sl25);
  CHECK(pd.flags.size() == 6);
  topo::SimplicialComplex b = tits_building(pd);
  CHECK(b.dim() == 0);
  CHECK(b.count(0) == 6);
  topo::Homology h = topo::homology(b, true);
  CHECK(h.betti == std::vector<int64_t>{5});

  // GL_2(4): 5 Borels
  ReductiveGroup gl24 = build_reductive(ReductiveSpec::parse("kind=GL,n=2,q=4"));
  CHECK(parabolic_poset(gl24).flags.size() == 5);

  // SL_3(2): 7 + 7 maximals, 21 Borels; building is the barycentric Fano
  // incidence graph with first homology Z^8
  ReductiveGroup sl32 = build_reductive(ReductiveSpec::parse("kind=SL,n=3,q=2"));
  ParabolicData pd3 = parabolic_poset(sl32);
  size_t maximal = 0, borel = 0;
  for (auto& fp : pd3.flags) {
    if (fp.flag.size() == 1)
      ++maximal;
    if (fp.flag.size() == 2)
      ++borel;
  }
  CHECK(maximal == 14);
  CHECK(borel == 21);
  topo::Homology h3 = topo::homology(tits_building(pd3), true);
  CHECK(h3.betti == std::vector<int64_t>{0, 8});
}

TEST_CASE("prime contexts") {
  ReductiveSpec gl24 = ReductiveSpec::parse("kind=GL,n=2,q=4");
  PrimeContext pc = prime_context(gl24, 5);
  CHECK(pc.in_pi);
  CHECK(pc.e == 2);  // order of 4 mod 5
  CHECK(pc.applicable);  // 5 does not divide |Z| = 3

  // ell = 2 is never in pi' (on a spec where 2 is not the characteristic)
  CHECK(!prime_context(ReductiveSpec::parse("kind=GL,n=2,q=5"), 2).in_pi_prime);

  // GL_3(4) at ell = 3 fails the simply-connected center condition
  ReductiveSpec gl34 = ReductiveSpec::parse("kind=GL,n=3,q=4");
  PrimeContext pc3 = prime_context(gl34, 3);
  CHECK(!pc3.coprime_center_sc);  // gcd(3, 3) = 3
  CHECK(!pc3.in_pi);

  // GL_2(4) at ell = 3 is in pi but 3 divides |Z| = 3
  PrimeContext pc2 = prime_context(gl24, 3);
  CHECK(pc2.in_pi);
  CHECK(!pc2.applicable);

  // in_pi implies in_pi'
  for (uint32_t ell : {3u, 5u, 7u})
    for (const char* s : {"kind=GL,n=2,q=4", "kind=GL,n=3,q=2", "kind=SL,n=2,q=5"}) {
      ReductiveSpec spec = ReductiveSpec::parse(s);
      if (spec.q % ell == 0)
        continue;
      PrimeContext c = prime_context(spec, ell);
      if (c.in_pi)
        CHECK(c.in_pi_prime);
    }

  CHECK_THROWS(prime_context(gl24, 2 * 2));  // not prime
  CHECK_THROWS(prime_context(ReductiveSpec::parse("kind=GL,n=2,q=5"), 5));  // ell = p
}

TEST_CASE("levi types") {
  auto t24 = levi_types(2, 2);  // GL_2, e=2: only the Coxeter torus type
  REQUIRE(t24.size() == 1);
  CHECK(t24[0].m == 0);
  CHECK(t24[0].a == std::vector<uint32_t>{1});

  auto t42 = levi_types(4, 2);  // GL_4, e=2: (2,[1]), (0,[2]), (0,[1,1])
  REQUIRE(t42.size() == 3);
  CHECK(t42[0].m == 2);
  CHECK(t42[0].a == std::vector<uint32_t>{1});
  CHECK(t42[1].m == 0);
  CHECK(t42[1].a == std::vector<uint32_t>{2});
  CHECK(t42[2].m == 0);
  CHECK(t42[2].a == std::vector<uint32_t>{1, 1});
}

TEST_CASE("e-split Levi enumeration: GL_2(4), e = 2") {
  ReductiveGroup rg = build_reductive(ReductiveSpec::parse("kind=GL,n=2,q=4"));
  auto levis = enumerate_esplit_levis(rg, 2, 5);
  // six conjugate Coxeter tori of order 15: orbit count = |G| / |N_G(T)|
  REQUIRE(levis.size() == 6);
  for (auto& lv : levis) {
    CHECK(lv.sub.order() == 15);
    CHECK(lv.center.order() == 15);
    CHECK(lv.center_ell.order() == 5);
  }
  grp::Subgroup N = grp::normalizer(rg.whole, levis[0].sub);
  CHECK(N.order() == 30);
  CHECK(rg.G->size() / N.order() == 6);
}

TEST_CASE("e = 1 Levis of GL_2(q) are the diagonal torus conjugates") {
  ReductiveGroup rg = build_reductive(ReductiveSpec::parse("kind=GL,n=2,q=3"));
  auto levis = enumerate_esplit_levis(rg, 1, 2);
  // oracle: stabilizers of decompositions into two distinct lines
  auto subs = proper_subspaces(rg);
  std::set<std::vector<uint32_t>> expected;
  for (size_t i = 0; i < subs.size(); ++i)
    for (size_t j = i + 1; j < subs.size(); ++j) {
      // pointwise stabilizer of the pair of lines: g fixes both lines
      std::vector<uint32_t> keep;
      for (uint32_t gi = 0; gi < rg.G->size(); ++gi) {
        bool ok = true;
        for (uint64_t v : subs[i])
          if (v && !std::binary_search(subs[i].begin(), subs[i].end(),
                                       detail::vec_apply(rg, v, rg.G->keys[gi])))
            ok = false;
        for (uint64_t v : subs[j])
          if (v && !std::binary_search(subs[j].begin(), subs[j].end(),
                                       detail::vec_apply(rg, v, rg.G->keys[gi])))
            ok = false;
        if (ok)
          keep.push_back(gi);
      }
      expected.insert(keep);
    }
  std::set<std::vector<uint32_t>> got;
  for (auto& lv : levis)
    got.insert(lv.sub.elems);
  CHECK(got == expected);
}

TEST_CASE("GL_4(2), e = 2: three types with the right orbit sizes") {
  ReductiveGroup rg = build_reductive(ReductiveSpec::parse("kind=GL,n=4,q=2"));
  CHECK(rg.G->size() == 20160);
  auto levis = enumerate_esplit_levis(rg, 2, 3);
  std::map<std::string, size_t> counts;
  for (auto& lv : levis)
    counts[lv.type.describe()] += 1;
  REQUIRE(counts.size() == 3);
  CHECK(counts["(2,[1])"] == 560);
  CHECK(counts["(0,[2])"] == 56);
  CHECK(counts["(0,[1,1])"] == 280);
  for (auto& lv : levis) {
    if (lv.type.m == 0 && lv.type.a == std::vector<uint32_t>{2})
      CHECK(lv.sub.order() == 180);  // GL_2(4)
    if (lv.type.m == 2)
      CHECK(lv.sub.order() == 18);   // GL_2(2) x GL_1(4)
    if (lv.type.a == std::vector<uint32_t>{1, 1})
      CHECK(lv.sub.order() == 9);    // GL_1(4) x GL_1(4)
  }
}

TEST_CASE("minimal containing Levi") {
  ReductiveGroup rg = build_reductive(ReductiveSpec::parse("kind=GL,n=2,q=4"));
  auto levis = enumerate_esplit_levis(rg, 2, 5);
  // the torus contains itself minimally
  auto idx = minimal_esplit_containing(levis, levis[0].sub);
  REQUIRE(idx.has_value());
  CHECK(levis[*idx].sub.elems == levis[0].sub.elems);
  // the center Z(G) = C3 sits inside every torus: no unique minimal
  grp::Subgroup Z = grp::center(rg.whole);
  CHECK_THROWS(minimal_esplit_containing(levis, Z));
  // a Sylow-2 normalizer is too big for any proper Levi: sentinel
  grp::Subgroup S2 = grp::sylow_subgroup(rg.whole, 2);
  grp::Subgroup NS = grp::normalizer(rg.whole, S2);
  CHECK(!minimal_esplit_containing(levis, NS).has_value());
}

TEST_CASE("defining characteristic data") {
  ReductiveGroup sl25 = build_reductive(ReductiveSpec::parse("kind=SL,n=2,q=5"));
  DefiningCharData d = defining_char_data(sl25);
  CHECK(d.U.order() == 5);
  CHECK(d.centralizer_identity);

  ReductiveGroup sl32 = build_reductive(ReductiveSpec::parse("kind=SL,n=3,q=2"));
  DefiningCharData d3 = defining_char_data(sl32);
  CHECK(d3.U.order() == 8);
  CHECK(d3.centralizer_identity);

  ReductiveGroup gl24 = build_reductive(ReductiveSpec::parse("kind=GL,n=2,q=4"));
  DefiningCharData d2 = defining_char_data(gl24);
  CHECK(d2.U.order() == 4);
  CHECK(d2.centralizer_identity);
}
