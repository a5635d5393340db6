#include "commands.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace zlincat;
namespace fs = std::filesystem;

namespace {

const std::string data_dir = ZLINCAT_DATA;

std::string data(const std::string& f) { return data_dir + "/" + f; }

std::string scratch(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "zlincat_test_cli";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

int run(const std::string& args) {
  const std::string cmd = std::string(ZLINCAT_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("sha256 matches known digests", "[cli]") {
  CHECK(cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("validate", "[cli]") {
  for (const char* f : {"z.json", "zmod4.json", "zmod5.json", "z2group.json", "ctilde2.json", "ctilde3.json",
                        "sumfields_2_3.json", "orbit_z2.json", "orbit_s3.json"}) {
    INFO(f);
    const auto o = cli::cmd_validate(data(f));
    CHECK(o.exit_code == 0);
    CHECK(o.report["verdict"] == "valid");
    CHECK(o.report["inputs"][data(f)] == "sha256:" + cli::sha256_hex(read_file(data(f))));
  }
  const std::string text = read_file(data("zmod4.json"));
  CHECK(cli::cmd_validate(scratch("trunc.json", text.substr(0, text.size() / 2))).exit_code == 2);
  CHECK(cli::cmd_validate("/nonexistent.json").exit_code == 2);

  json j = json::parse(read_file(data("ctilde2.json")));
  j["composition"]["0->1->0"][0][0] = json::array({"2"});
  const auto bad = cli::cmd_validate(scratch("bad.json", j.dump()));
  CHECK(bad.exit_code == 1);
  CHECK_FALSE(bad.report["violations"].empty());
  CHECK(cli::cmd_ring(scratch("bad.json", j.dump()), 0).exit_code == 1);
}

TEST_CASE("ring", "[cli]") {
  auto o = cli::cmd_ring(data("ctilde2.json"), 0);
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["ring"]["rank"] == 4);
  CHECK(o.report["verified"]["witness"]["ring"] == "M2(Z)");
  CHECK(o.report["verified"]["witness"]["products_checked"] == 16);

  o = cli::cmd_ring(data("z.json"), 2);
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["verified"]["truncation"]["rank"] == 9);
  CHECK(o.report["verified"]["truncation"]["ok"] == true);

  o = cli::cmd_ring(data("sumfields_2_3.json"), 0);
  CHECK(o.report["ring"]["order"] == "6");
  CHECK(o.report["verified"]["witness"]["ring"] == "M1(F2) x M1(F3)");
}

TEST_CASE("check-regular", "[cli]") {
  cli::CheckRegularOptions opt;
  opt.basis = true;
  opt.depth = 2;
  auto o = cli::cmd_check_regular(data("zmod5.json"), opt);
  REQUIRE(o.exit_code == 0);
  for (const auto& m : o.report["morphisms"]) CHECK(m["depth"] == 1);
  CHECK(o.report["negative_k"]["tier"] == "bounded-depth-evidence");
  REQUIRE(o.report["cited"].size() == 2);
  for (const auto& c : o.report["cited"]) {
    CHECK(c["theorem"] == "teofo");
    CHECK(c["tag"] == "cited");
  }

  opt = {};
  opt.morphisms = data("z_times.json");
  opt.depth = 2;
  opt.certificates = scratch("certs.json", "");
  o = cli::cmd_check_regular(data("z.json"), opt);
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["morphisms"].size() == 9);
  for (const auto& m : o.report["morphisms"]) CHECK(m["depth"] == 1);

  cli::CheckRegularOptions replay;
  replay.replay = *opt.certificates;
  CHECK(cli::cmd_check_regular(data("z.json"), replay).exit_code == 0);
  json dump = json::parse(read_file(*opt.certificates));
  dump["certificates"][0]["alpha"]["entries"][0][0] = json::array({"0"});
  replay.replay = scratch("certs_bad.json", dump.dump());
  CHECK(cli::cmd_check_regular(data("z.json"), replay).exit_code == 1);

  opt = {};
  opt.morphisms = data("zmod4_times2.json");
  opt.depth = 6;
  o = cli::cmd_check_regular(data("zmod4.json"), opt);
  CHECK(o.exit_code == 1);
  CHECK(o.report["verdict"] == "inconclusive");
  CHECK(o.report["cited"].empty());
  CHECK(o.report["negative_k"]["tier"] == "none");

  opt.morphisms = scratch("junk.json", "{\"morphisms\": [{\"src\": [\"nope\"]}]}");
  CHECK(cli::cmd_check_regular(data("zmod4.json"), opt).exit_code == 2);
  opt = {};
  CHECK(cli::cmd_check_regular(data("zmod4.json"), opt).exit_code == 2);
}

TEST_CASE("equiv is deterministic and passes on the corpus", "[cli]") {
  for (const char* f : {"zmod4.json", "orbit_z2.json", "ctilde2.json"}) {
    INFO(f);
    const auto a = cli::cmd_equiv(data(f), 5, 11);
    const auto b = cli::cmd_equiv(data(f), 5, 11);
    CHECK(a.exit_code == 0);
    CHECK(a.report.dump() == b.report.dump());
  }
  const auto o = cli::cmd_equiv(data("z.json"), 0, 1);
  CHECK(o.exit_code == 0);
  CHECK(o.report["trials"].empty());
  CHECK(cli::cmd_equiv(data("z.json"), 3, 1).report.dump() != cli::cmd_equiv(data("z.json"), 3, 2).report.dump());
}

TEST_CASE("k0", "[cli]") {
  auto o = cli::cmd_k0(data("ctilde2.json"), std::nullopt, std::nullopt);
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["k0"]["group"] == "Z^1");
  for (const auto& c : o.report["classes"]) CHECK(c["class"] == json::array({"1"}));

  o = cli::cmd_k0(data("sumfields_2_3.json"), std::nullopt, std::nullopt);
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["k0"]["group"] == "Z^2");
  CHECK(o.report["classes"][0]["class"] == json::array({"1", "0"}));
  CHECK(o.report["classes"][1]["class"] == json::array({"0", "1"}));
  CHECK(o.report["negative_k"]["tier"] == "certified-family");

  o = cli::cmd_k0(data("ctilde2.json"), std::nullopt, data("ctilde2_sample.json"));
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["classes"].size() == 10);
  CHECK(o.report["verified"]["additivity_checks"] == 9);

  o = cli::cmd_k0(data("ctilde2.json"), data("ctilde2_bad_witness.json"), std::nullopt);
  CHECK(o.exit_code == 1);
  CHECK(o.report["error"]["failing_pair"].is_array());

  CHECK(cli::cmd_k0(data("zmod4.json"), std::nullopt, std::nullopt).exit_code == 1);
  CHECK(cli::cmd_k0(data("ctilde2.json"), scratch("w.json", "{\"blocks\": 3}"), std::nullopt).exit_code == 2);
}

TEST_CASE("build", "[cli]") {
  cli::BuildOptions b;
  b.group = "perm:2:(1 2)";
  b.subgroups = "e;full";
  auto o = cli::cmd_build("orbit", b);
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["spec"] == json::parse(read_file(data("orbit_z2.json"))));
  const CategoryData d = category_data_from_json(o.report["spec"]);
  CHECK(validate(d).ok());
  CHECK(d.homs[0].ngens() == 2);
  CHECK(d.homs[1].ngens() == 1);
  CHECK(d.homs[2].ngens() == 0);
  CHECK(d.homs[3].ngens() == 1);

  b = {};
  b.cyclic = 3;
  b.nilpotent = {"Z", "3"};
  o = cli::cmd_build("graded", b);
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["spec"]["objects"].size() == 3);
  b.nilpotent = {"Z", "2"};
  CHECK(cli::cmd_build("graded", b).exit_code == 2);

  b = {};
  b.primes = {"2", "3"};
  o = cli::cmd_build("sumfields", b);
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["spec"] == json::parse(read_file(data("sumfields_2_3.json"))));
  b.primes = {"4"};
  CHECK(cli::cmd_build("sumfields", b).exit_code != 0);

  b = {};
  b.group = "perm:3:(1 2 3),(1 2)";
  b.subgroups = "e;(1 2 3);full";
  CHECK(cli::cmd_build("orbit", b).exit_code == 1);
  b.allow_partial_family = true;
  CHECK(cli::cmd_build("orbit", b).exit_code == 0);
  b.group = "perm:3:(1 2 4)";
  CHECK(cli::cmd_build("orbit", b).exit_code == 2);

  b = {};
  b.ring = "Z/6";
  CHECK(cli::cmd_build("ring", b).exit_code == 0);
  b.ring = "Q";
  CHECK(cli::cmd_build("ring", b).exit_code == 2);
  CHECK(cli::cmd_build("torus", b).exit_code == 2);
}

TEST_CASE("pseudo-kernel and quasi-inverse", "[cli]") {
  auto o = cli::cmd_pseudo_kernel(data("zmod4.json"), data("zmod4_times2.json"), std::nullopt, 3);
  REQUIRE(o.exit_code == 0);
  CHECK(o.report["chain"]["maps"].size() == 4);
  CHECK(o.report["verified"]["exact_at_every_object"] == true);
  CHECK(cli::cmd_pseudo_kernel(data("zmod4.json"), data("zmod4_times2.json"), "other", 3).exit_code == 2);

  o = cli::cmd_quasi_inverse(data("zmod4.json"), data("zmod4_times2.json"));
  CHECK(o.exit_code == 1);
  CHECK(o.report["morphisms"][0]["quasi_inverse"].is_null());
  o = cli::cmd_quasi_inverse(data("z.json"), data("z_times.json"));
  CHECK(o.exit_code == 1);
  CHECK(o.report["verified"]["found"] == 0);
}

TEST_CASE("the binary honours the exit code contract", "[cli][binary]") {
  CHECK(run("validate " + data("z.json")) == 0);
  CHECK(run("validate " + data("zmod4.json")) == 0);
  const std::string text = read_file(data("z.json"));
  CHECK(run("validate " + scratch("trunc_bin.json", text.substr(0, text.size() - 5))) == 2);
  CHECK(run("k0 " + data("ctilde2.json") + " --witness " + data("ctilde2_bad_witness.json")) == 1);
  CHECK(run("check-regular " + data("zmod4.json") + " --morphisms " + data("zmod4_times2.json") + " --depth 6") == 1);
  CHECK(run("check-regular " + data("z.json") + " --morphisms " + data("z_times.json") + " --depth 2") == 0);
  CHECK(run("no-such-command") == 2);
  CHECK(run("ring") == 2);
  CHECK(run("build ring Z/3 Z/5") == 2);
  CHECK(run("build orbit --group \"perm:3:(1 2 3),(1 2)\" --subgroups \"e;(1 2 3);full\"") == 1);

  const std::string out = (fs::temp_directory_path() / "zlincat_test_cli" / "built.json").string();
  REQUIRE(run("build graded --cyclic 3 --nilpotent-ring Z 3 --out " + out) == 0);
  CHECK(run("validate " + out) == 0);
  CHECK(run("ring " + out) == 0);
}

TEST_CASE("reports do not depend on the thread cap", "[cli]") {
  cli::CheckRegularOptions opt;
  opt.basis = true;
  opt.depth = 3;
  setenv("ZLINCAT_THREADS", "1", 1);
  const auto a = cli::cmd_check_regular(data("orbit_z2.json"), opt);
  setenv("ZLINCAT_THREADS", "4", 1);
  const auto b = cli::cmd_check_regular(data("orbit_z2.json"), opt);
  unsetenv("ZLINCAT_THREADS");
  CHECK(a.report.dump() == b.report.dump());
}
