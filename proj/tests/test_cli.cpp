#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "hyll/service.hpp"

using namespace hyll;

namespace {

namespace fs = std::filesystem;

std::string data(const std::string& name) { return std::string(HYLL_SOURCE_DIR) + "/data/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "hyll");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("hyll_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("compile reproduces the goldens") {
  Run r = cli({"compile", data("p53.bio")});
  CHECK(r.code == 0);
  CHECK(r.out == slurp(std::string(HYLL_SOURCE_DIR) + "/tests/golden/p53.compiled"));
  CHECK(cli({"compile", data("p53_strong.bio")}).out ==
        slurp(std::string(HYLL_SOURCE_DIR) + "/tests/golden/p53_strong.compiled"));
  Json j = Json::parse(cli({"--json", "compile", data("p53.bio")}).out);
  CHECK(j["definitions"] == r.out);
}

TEST_CASE("check-model reports structured errors") {
  CHECK(cli({"check-model", data("p53.bio")}).out == "ok: 3 entities, 6 rules\n");
  fs::path bad = scratch("bad.bio");
  std::ofstream(bad) << "vars a b;\nrule general: a => c;\n";
  Run r = cli({"check-model", bad.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("error[ParseError]") == 0);
  Json e = Json::parse(cli({"--json", "check-model", bad.string()}).err);
  CHECK(e["error"]["kind"] == "ParseError");
  CHECK(e["error"]["line"] == 2);
  CHECK(cli({"check-model"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
}

TEST_CASE("prove writes a certificate that check-cert accepts") {
  fs::path cert = scratch("p2.cert");
  Run r = cli({"prove", data("property2.hp"), "-o", cert.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("written to") != std::string::npos);
  CHECK(cli({"check-cert", cert.string()}).code == 0);
  CHECK(Json::parse(cli({"--json", "check-cert", cert.string()}).out)["ok"] == true);

  // Stdout and file output carry the same bytes.
  CHECK(cli({"prove", data("property2.hp")}).out == slurp(cert.string()));

  Json j = Json::parse(cli({"--json", "prove", data("property1_v1.hp")}).out);
  CHECK(j["witnesses"] == Json{{"u", "2"}, {"v", "2"}});
  CHECK(j["check"]["ok"] == true);
}

TEST_CASE("check-cert rejects a corrupted certificate with its path") {
  fs::path cert = scratch("good.cert");
  cli({"prove", data("property2.hp"), "-o", cert.string()});
  Json c = Json::parse(slurp(cert.string()));
  // Turn the first init leaf into a bogus rule.
  Json* n = &c["obligations"][0]["proof"];
  std::vector<int> path;
  while (!(*n)["premises"].empty()) {
    n = &(*n)["premises"][0];
    path.push_back(0);
  }
  (*n)["rule"] = "topR";
  fs::path bad = scratch("corrupted.cert");
  std::ofstream(bad) << c.dump();
  Run r = cli({"check-cert", bad.string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("rejected: obligation 0") == 0);
  Json v = Json::parse(cli({"--json", "check-cert", bad.string()}).out);
  CHECK(v["ok"] == false);
  CHECK(v["path"] == path);

  std::ofstream(scratch("junk.cert")) << "{";
  Json e = Json::parse(cli({"--json", "check-cert", scratch("junk.cert").string()}).err);
  CHECK(e["error"]["kind"] == "CertificateError");
}

TEST_CASE("auto and oracle") {
  fs::path g = scratch("false.hp");
  std::ofstream(g) << "goal: . ; . |- 0 @ w\n";
  Run r = cli({"auto", g.string(), "--depth", "6"});
  CHECK(r.code == 1);
  CHECK(r.err.find("NotFound") != std::string::npos);

  fs::path id = scratch("id.hp");
  std::ofstream(id) << "goal: . ; p * q @ w |- q * p @ w\n";
  CHECK(Json::parse(cli({"--json", "auto", id.string(), "--depth", "3"}).out)["check"]["ok"] == true);

  Json reach = Json::parse(
      cli({"--json", "oracle", data("p53.bio"), "--from", "!p53 Mdm2 DNAdam", "--to", "p53 !Mdm2", "--bound", "4"}).out);
  CHECK(reach["reachable"] == true);
  CHECK(reach["path"] == std::vector<int>{1, 2});
  Json fix =
      Json::parse(cli({"--json", "oracle", data("p53.bio"), "--from", "!p53 Mdm2 !DNAdam", "--query", "fixpoint"}).out);
  CHECK(fix["fixpoint"] == true);
  CHECK(fix["enabled"] == std::vector<int>{4, 6});
  CHECK(cli({"oracle", data("p53.bio"), "--from", "!p53 Mdm2 DNAdam", "--to", "p53 Mdm2 !DNAdam", "--bound", "1"})
            .out.find("not reachable") == 0);
  CHECK(cli({"oracle", data("p53.bio"), "--from", "p53 zzz"}).code == 1);
}

TEST_CASE("repl replays a transcript to the same certificate bytes") {
  ProofScript s = load_script(data("property1_v1.hp"));
  fs::path goal = scratch("p1_goal.hp");
  {
    std::ofstream g(goal);
    g << "model " << data("p53.bio") << "\n";
    for (std::size_t i = 1; i < s.header.size(); ++i) g << s.header[i] << "\n";
  }
  fs::path cert = scratch("p1_repl.cert");
  fs::path transcript = scratch("p1_transcript.hp");
  std::string input = "tensorR\nundo\nundo\n";
  for (const auto& st : s.steps) input += st.text + "\n";
  input += "save " + cert.string() + "\ntranscript " + transcript.string() + "\n";
  Run r = cli({"repl", goal.string()}, input);
  CHECK(r.code == 0);
  CHECK(r.out.find("Proof complete.") != std::string::npos);
  CHECK(r.err.find("nothing to undo") != std::string::npos);
  std::string expected = cli({"prove", data("property1_v1.hp")}).out;
  CHECK(slurp(cert.string()) == expected);
  CHECK(cli({"prove", transcript.string()}).out == expected);
}

TEST_CASE("service: create, apply, extract") {
  SessionService svc(ServiceOptions{data("")});
  Reply c = svc.handle("POST", "/sessions", Json{{"goal", ". ; p @ w |- p @ w"}}.dump());
  REQUIRE(c.status == 201);
  std::string id = c.body["session"];
  CHECK(c.body["goals"].size() == 1);

  Reply early = svc.handle("POST", "/sessions/" + id + "/extract", "");
  CHECK(early.status == 409);
  CHECK(early.body["error"]["kind"] == "OpenGoals");

  Reply bogus = svc.handle("POST", "/sessions/" + id + "/apply", Json{{"tactic", "frobnicate"}}.dump());
  CHECK(bogus.status == 400);
  CHECK(bogus.body["error"]["kind"] == "ParseError");
  CHECK(svc.handle("GET", "/sessions/" + id, "").body["goals"].size() == 1);
  Reply stuck = svc.handle("POST", "/sessions/" + id + "/apply", Json{{"tactic", "oplusR1"}}.dump());
  CHECK(stuck.status == 400);
  CHECK(stuck.body["error"]["kind"] == "RuleNotApplicable");
  std::string zero = svc.handle("POST", "/sessions", Json{{"goal", ". ; . |- 0 @ w"}}.dump()).body["session"];
  Reply search = svc.handle("POST", "/sessions/" + zero + "/apply", Json{{"tactic", "auto 3"}}.dump());
  CHECK(search.status == 422);
  CHECK(search.body["error"]["kind"] == "NotFound");
  CHECK(svc.handle("GET", "/sessions/" + zero, "").body["goals"].size() == 1);

  Reply done = svc.handle("POST", "/sessions/" + id + "/apply", Json{{"tactic", "init"}}.dump());
  CHECK(done.status == 200);
  CHECK(done.body["goals"].empty());
  CHECK(done.body["complete"] == true);
  Reply ex = svc.handle("POST", "/sessions/" + id + "/extract", "");
  CHECK(ex.status == 200);
  CHECK(ex.body["check"]["ok"] == true);
  CHECK(check_certificate(read_certificate(ex.body["certificate"])).ok);

  Reply undo = svc.handle("POST", "/sessions/" + id + "/undo", "");
  CHECK(undo.body["goals"].size() == 1);
  CHECK(svc.handle("POST", "/sessions/" + id + "/undo", "").status == 400);
  CHECK(svc.handle("DELETE", "/sessions/" + id, "").status == 200);
  CHECK(svc.handle("GET", "/sessions/" + id, "").status == 404);
}

TEST_CASE("service: case analysis lists rule indices") {
  SessionService svc(ServiceOptions{data("")});
  Json list = svc.handle("GET", "/examples", "").body["examples"];
  CHECK(list.size() == 5);
  CHECK(list[3]["name"] == "property3");
  Json p3 = svc.handle("GET", "/examples/property3", "").body;
  CHECK(p3["goals"].size() == 2);

  Reply c = svc.handle("POST", "/sessions", Json{{"example", "property3"}}.dump());
  REQUIRE(c.status == 201);
  std::string id = c.body["session"];
  int ax = c.body["goals"][1]["id"];
  Reply r = svc.handle("POST", "/sessions/" + id + "/apply", Json{{"tactic", "limpR ; settle ; cases"}, {"goal", ax}}.dump());
  REQUIRE(r.status == 200);
  REQUIRE(r.body["goals"].size() == 7);
  for (int i = 1; i <= 6; ++i) {
    CHECK(r.body["goals"][i]["case"]["index"] == i);
    CHECK(r.body["goals"][i]["case"]["label"] == "rule " + std::to_string(i));
  }
  CHECK(r.body["goals"][0]["case"].is_null());
  CHECK(svc.handle("GET", "/sessions/" + id + "/transcript", "").body["replayable"] == false);
  CHECK(svc.handle("POST", "/sessions/" + id + "/apply", Json{{"tactic", "init"}, {"goal", 9999}}.dump()).status == 400);

  // Replaying the shipped tactics reproduces the prove output.
  Reply fresh = svc.handle("POST", "/sessions", Json{{"example", "property2"}}.dump());
  std::string fid = fresh.body["session"];
  Json tactics = svc.handle("GET", "/examples/property2", "").body["tactics"];
  for (const auto& t : tactics)
    REQUIRE(svc.handle("POST", "/sessions/" + fid + "/apply", Json{{"tactic", t}}.dump()).status == 200);
  Reply ex = svc.handle("POST", "/sessions/" + fid + "/extract", "");
  CHECK(ex.body["certificate"] == cli({"prove", data("property2.hp")}).out);
}

TEST_CASE("service: malformed input and expiry") {
  auto now = std::chrono::steady_clock::now();
  ServiceOptions opt{data("")};
  opt.now = [&] { return now; };
  SessionService svc(opt);
  CHECK(svc.handle("POST", "/sessions", "not json").status == 400);
  CHECK(svc.handle("POST", "/sessions", "[1]").status == 400);
  CHECK(svc.handle("POST", "/sessions", "{}").status == 400);
  CHECK(svc.handle("POST", "/sessions", Json{{"goal", 3}}.dump()).status == 400);
  CHECK(svc.handle("POST", "/sessions", Json{{"goal", ". ; p @ w |-"}}.dump()).body["error"]["kind"] == "ParseError");
  CHECK(svc.handle("POST", "/sessions", Json{{"example", "../etc/passwd"}}.dump()).status == 400);
  CHECK(svc.handle("POST", "/sessions", Json{{"example", "nothing"}}.dump()).status == 404);
  CHECK(svc.handle("GET", "/nowhere", "").status == 404);
  CHECK(svc.handle("PUT", "/sessions", "").status == 405);
  CHECK(svc.handle("GET", "/sessions/x/apply", "").status == 404);

  std::string id = svc.handle("POST", "/sessions", Json{{"goal", ". ; p @ w |- p @ w"}}.dump()).body["session"];
  CHECK(svc.handle("POST", "/sessions/" + id + "/apply", Json{{"goal", 0}}.dump()).status == 400);
  CHECK(svc.handle("POST", "/sessions/" + id + "/apply", Json{{"tactic", "init"}, {"goal", "x"}}.dump()).status == 400);
  now += std::chrono::minutes(29);
  CHECK(svc.handle("GET", "/sessions/" + id, "").status == 200);
  now += std::chrono::minutes(29);
  CHECK(svc.handle("GET", "/sessions/" + id, "").status == 200);
  now += std::chrono::minutes(31);
  CHECK(svc.handle("GET", "/sessions/" + id, "").status == 404);
  CHECK(svc.session_count() == 0);

  // Scripts given as goal text replay their proof lines.
  Reply s = svc.handle("POST", "/sessions", Json{{"goal", "goal: . ; p @ w |- p * 1 @ w\ntensorR {0}\ninit\noneR\n"}}.dump());
  CHECK(s.body["complete"] == true);
  CHECK(s.body["history"].size() == 3);
  Reply bad = svc.handle("POST", "/sessions", Json{{"goal", "goal: . ; p @ w |- q @ w\n\ninit\n"}}.dump());
  CHECK(bad.body["error"]["line"] == 3);
}

TEST_CASE("HTTP round trip with concurrent sessions") {
  SessionService svc(ServiceOptions{data("")});
  HttpServer server(svc);
  int port = server.start("127.0.0.1", 0);
  REQUIRE(port > 0);
  auto worker = [port](bool& ok) {
    httplib::Client cl("127.0.0.1", port);
    auto c = cl.Post("/sessions", Json{{"example", "property2"}}.dump(), "application/json");
    if (!c || c->status != 201) return;
    std::string id = Json::parse(c->body)["session"];
    auto ex = cl.Get("/examples/property2");
    Json tactics = Json::parse(ex->body)["tactics"];
    for (const auto& t : tactics) {
      auto r = cl.Post("/sessions/" + id + "/apply", Json{{"tactic", t}}.dump(), "application/json");
      if (!r || r->status != 200) return;
    }
    auto cert = cl.Post("/sessions/" + id + "/extract", "", "application/json");
    ok = cert && cert->status == 200 && Json::parse(cert->body)["check"]["ok"] == true;
  };
  bool ok[4] = {false, false, false, false};
  std::vector<std::thread> ts;
  for (int k = 0; k < 4; ++k) ts.emplace_back(worker, std::ref(ok[k]));
  for (auto& t : ts) t.join();
  for (bool b : ok) CHECK(b);
  CHECK(svc.session_count() == 4);

  httplib::Client cl("127.0.0.1", port);
  auto junk = cl.Post("/sessions", "{{{", "application/json");
  REQUIRE(junk);
  CHECK(junk->status == 400);
  CHECK(Json::parse(junk->body)["error"]["kind"] == "ParseError");
  server.stop();
}
