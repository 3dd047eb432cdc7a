#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <brpairs/cli.hpp>

#include <filesystem>

using namespace brpairs;
using namespace brpairs::cli;

namespace {

struct RunResult {
  int code;
  std::string out, err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kGL24 = "kind=GL,n=2,q=4";

}  // namespace

TEST_CASE("parse_config") {
  RunConfig c = parse_config({"blocks", "--group", kGL24, "--ell", "5"});
  CHECK(c.command == "blocks");
  CHECK(c.group == kGL24);
  CHECK(c.ell == 5);
  CHECK(c.format == "json");

  RunConfig v = parse_config(
      {"verify", "theorem-a", "--group", "kind=GL,n=3,q=2", "--ell", "3", "--format", "json"});
  CHECK(v.command == "verify");
  CHECK(v.verify_task == "theorem-a");

  CHECK_THROWS_AS(parse_config({"blocks", "--group", kGL24, "--ell", "4"}), UsageError);
  CHECK_THROWS_AS(parse_config({"frobnicate"}), UsageError);
  CHECK_THROWS_AS(parse_config({"verify", "nonsense", "--group", kGL24, "--ell", "5"}),
                  UsageError);
  CHECK_THROWS_AS(parse_config({"blocks", "--ell", "5"}), UsageError);  // no group
}

TEST_CASE("config file with flag override") {
  std::string path = (std::filesystem::temp_directory_path() / "brpairs_test.cfg").string();
  {
    std::ofstream f(path, std::ios::trunc);
    f << "# defaults\ngroup = " << kGL24 << "\nell = 5\nformat = text\n";
  }
  RunConfig c = parse_config({"blocks", "--config", path, "--format", "json"});
  CHECK(c.group == kGL24);
  CHECK(c.ell == 5);
  CHECK(c.format == "json");  // flag wins
  std::filesystem::remove(path);
}

TEST_CASE("exit codes: 0 pass, 1 fail, 2 usage/precondition") {
  CHECK(run({"blocks", "--group", kGL24, "--ell", "5"}).code == 0);
  CHECK(run({"verify", "theorem-a", "--group", kGL24, "--ell", "5"}).code == 0);
  // precondition not applicable: 3 divides |Z| = 3
  CHECK(run({"verify", "theorem-a", "--group", kGL24, "--ell", "3"}).code == 2);
  CHECK(run({"blocks", "--group", kGL24, "--ell", "4"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  // cap exceeded is a usage-class error
  CHECK(run({"blocks", "--group", "kind=GL,n=4,q=2", "--ell", "3", "--max-group-order", "100"})
            .code == 2);
}

TEST_CASE("json reports are schema-shaped and byte-deterministic") {
  std::vector<std::string> args{"verify", "axioms", "--group", "kind=symmetric,n=3",
                                "--ell",  "2",      "--format", "json"};
  RunResult a = run(args);
  RunResult b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);  // byte identity

  ordered_json j = ordered_json::parse(a.out);
  CHECK(j.contains("task"));
  CHECK(j.contains("instance"));
  CHECK(j.contains("checks"));
  CHECK(j.contains("homology"));
  CHECK(j["homology"].contains("complex"));
  CHECK(j.contains("timing_ms"));
  CHECK(j["timing_ms"] == 0);
  CHECK(j.contains("version"));
  for (auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("pass"));
    CHECK(c["pass"] == true);
  }
}

TEST_CASE("homology command reports the Fano building values") {
  RunResult r = run({"building", "--group", "kind=SL,n=3,q=2", "--ell", "2"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["parabolics"] == 35);
  // reports carry unreduced Betti numbers: connected with first homology Z^8
  CHECK(j["homology"]["complex"][0]["betti"] == ordered_json::array({1, 8}));
}

TEST_CASE("threads do not change the bytes") {
  std::vector<std::string> base{"verify", "theorem-a", "--group", kGL24, "--ell", "5"};
  RunResult one = run(base);
  std::vector<std::string> two = base;
  two.push_back("--threads");
  two.push_back("2");
  RunResult par = run(two);
  CHECK(one.code == 0);
  CHECK(par.code == 0);
  CHECK(one.out == par.out);
}

TEST_CASE("cache round-trip: byte identity, warm hits, corruption is a miss") {
  std::string dir = (std::filesystem::temp_directory_path() / "brpairs_cache_test").string();
  std::filesystem::remove_all(dir);

  // store/load a Brauer poset of A5 at ell=2 via the poset command
  std::vector<std::string> args{"brauer-poset",
                                "--group",
                                "kind=perm,n=5,gens=[2,3,1,4,5];[1,2,4,5,3]",
                                "--ell",
                                "2",
                                "--block",
                                "principal",
                                "--cache-dir",
                                dir};
  RunResult cold = run(args);
  CHECK(cold.code == 0);
  CHECK(cold.err.find("cache hit") == std::string::npos);
  RunResult warm = run(args);
  CHECK(warm.code == 0);
  CHECK(warm.err.find("cache hit") != std::string::npos);
  CHECK(cold.out == warm.out);  // cache never changes results

  // direct round-trip byte identity at the payload level
  auto G = grp::generate_group("kind=perm,n=5,gens=[2,3,1,4,5];[1,2,4,5,3]");
  pairs::PairEngine eng(alg::splitting_context(G, 2));
  pairs::BrauerPoset bp = eng.build_poset(grp::whole_group(*G), 0, pairs::Flavor::full);
  auto payload = cache::serialize_brauer_poset(bp);
  pairs::BrauerPoset back = cache::deserialize_brauer_poset(payload, *G);
  CHECK(cache::serialize_brauer_poset(back) == payload);

  // corrupt every cache file: loads must turn into misses, commands recompute
  for (auto& entry : std::filesystem::directory_iterator(dir)) {
    std::fstream f(entry.path(), std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-1, std::ios::end);
    char c;
    f.seekg(-1, std::ios::end);
    f.get(c);
    f.seekp(-1, std::ios::end);
    f.put(char(c ^ 0x5a));
  }
  RunResult recovered = run(args);
  CHECK(recovered.code == 0);
  CHECK(recovered.err.find("cache hit") == std::string::npos);
  CHECK(recovered.out == cold.out);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cold vs warm verify runs: identical reports") {
  std::string dir = (std::filesystem::temp_directory_path() / "brpairs_cache_verify").string();
  std::filesystem::remove_all(dir);
  std::vector<std::string> args{"verify", "theorem-a", "--group", kGL24, "--ell", "5",
                                "--cache-dir", dir};
  RunResult cold = run(args);
  CHECK(cold.code == 0);
  size_t entries = 0;
  for ([[maybe_unused]] auto& e : std::filesystem::directory_iterator(dir))
    ++entries;
  CHECK(entries > 0);
  RunResult warm = run(args);
  CHECK(warm.code == 0);
  CHECK(cold.out == warm.out);
  std::filesystem::remove_all(dir);
}

TEST_CASE("esplit-poset command") {
  RunResult r = run({"esplit-poset", "--group", kGL24, "--ell", "5", "--block",
                     "all-positive-defect"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  REQUIRE(j["posets"].size() == 3);
  for (auto& p : j["posets"])
    CHECK(p["vertices"] == 6);
}

TEST_CASE("lemma-ab and prop-ac through the CLI") {
  RunResult r = run({"verify", "lemma-ab", "--group", "kind=product,factors=cyclic:2*symmetric:3",
                     "--ell", "2", "--block", "all-positive-defect"});
  CHECK(r.code == 0);
  RunResult p = run({"verify", "prop-ac", "--group", "kind=product,factors=cyclic:2*symmetric:3",
                     "--ell", "2", "--block", "all-positive-defect", "--centric-control"});
  CHECK(p.code == 0);
  ordered_json j = ordered_json::parse(p.out);
  bool saw_control = false;
  for (auto& c : j["checks"])
    if (c["name"].get<std::string>().find("centric-analogue") != std::string::npos)
      saw_control = true;
  CHECK(saw_control);
}
