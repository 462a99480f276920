#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>

#include "support.hpp"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CONVBROWSE_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string fixtures() { return "--fixtures " + testsupport::corpus_manifest().string() + " --no-cache"; }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").status == 2);
  CHECK(run("repl").status == 2);
  CHECK(run("repl http://gazette.test/ --depth -1").status == 2);
  CHECK(run("eval /no/such/manifest.json").status == 2);
  CHECK(run("repl http://gazette.test/ --ttl-hours 0").status == 2);
  CHECK(run("frobnicate").status == 2);
}

TEST_CASE("runtime failures exit with 1") {
  const Run r = run("repl http://nowhere.invalid/ --no-cache --fixtures " + testsupport::corpus_manifest().string() +
                    " --script " + (testsupport::golden_dir() / "gazette_covid.script").string());
  CHECK(r.status == 1);
  CHECK(r.out.find("error:") != std::string::npos);
}

TEST_CASE("script with an unknown utterance prints the help response") {
  testsupport::TempDir dir;
  const auto script = dir.path() / "s.txt";
  std::ofstream(script) << "# comment\n\nU: blorf the zorp\nquit\nWhere am I?\n";
  const Run r = run("repl gazette " + fixtures() + " --script " + script.string());
  CHECK(r.status == 0);
  CHECK(r.out.find("U: blorf the zorp\nA: Sorry, I can't help with that. You can say:") == 0);
  CHECK(r.out.find("Where am I") == std::string::npos);
}

TEST_CASE("scripted dialog matches the golden transcript") {
  const Run r = run("repl http://gazette.test/ " + fixtures() + " --script " +
                    (testsupport::golden_dir() / "gazette_covid.script").string());
  CHECK(r.status == 0);
  CHECK(r.out == testsupport::read_file(testsupport::golden_dir() / "gazette_covid.transcript"));
}

TEST_CASE("grammar dump lists every rule") {
  const Run r = run("grammar");
  CHECK(r.status == 0);
  CHECK(r.out.find("Lookup COVID") != std::string::npos);
  CHECK(r.out.find("Outline") != std::string::npos);
}

TEST_CASE("eval prints the macro table and json") {
  const Run table = run("eval " + testsupport::corpus_manifest().string());
  CHECK(table.status == 0);
  CHECK(table.out.rfind("averaging: macro", 0) == 0);
  const Run json = run("eval " + testsupport::corpus_manifest().string() + " --json --sweep 5,10");
  CHECK(json.status == 0);
  CHECK(json.out.find("\"threshold\": 5") != std::string::npos);
  CHECK(run("eval " + testsupport::corpus_manifest().string() + " --sweep 5,x").status == 2);
}

TEST_CASE("crawl prints offerings") {
  const Run r = run("crawl http://gazette.test/ " + fixtures() + " --json");
  CHECK(r.status == 0);
  CHECK(r.out.find("http://gazette.test/about.html") != std::string::npos);
}
