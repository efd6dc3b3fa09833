#include "doctest.h"

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace conf;
using conf::cli::json;

namespace {

const std::string kJobs = CONF_JOBS_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run conf_run(std::vector<std::string> args) {
  args.insert(args.begin(), "conf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("fnv1a") {
  CHECK(cli::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(cli::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("check: compactification passes and is deterministic") {
  const auto a = conf_run({"check", "--job", kJobs + "/compactification.json"});
  const auto b = conf_run({"check", "--job", kJobs + "/compactification.json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto r = a.report();
  CHECK(r["pass"] == true);
  CHECK(r["version"] == cli::kVersion);
  std::vector<std::string> names;
  for (const auto& c : r["checks"]) {
    names.push_back(c["name"]);
    CHECK(c["pass"] == true);
    CHECK(c["residual"].is_number());
  }
  CHECK(names == std::vector<std::string>{"conformality", "probe_suite", "gradient_condition", "null_lines"});
}

TEST_CASE("check: swap map") {
  const auto run = conf_run({"check", "--job", kJobs + "/swap.json"});
  CHECK(run.code == 1);
  const auto r = run.report();
  CHECK(r["pass"] == false);
  CHECK(r["reason"] == "anti-conformal (λ<0); gradient condition violated");
  CHECK(r["checks"][1]["name"] == "probe_suite");
  CHECK(r["checks"][1]["pass"] == true);
  CHECK(r["checks"][0]["witness"]["reason"] == "anti-conformal (λ<0)");
}

TEST_CASE("usage and parse errors exit 2") {
  const auto bad = conf_run({"check", "--sig", "2,1", "--comp", "x +* t", "x"});
  CHECK(bad.code == 2);
  const auto r = bad.report();
  CHECK(r["error"]["kind"] == "SyntaxError");
  CHECK(r["error"]["offset"] == 3);
  CHECK(r["checks"].empty());

  CHECK(conf_run({"check", "--comp", "x", "q"}).report()["error"]["kind"] == "UnknownIdentifier");
  CHECK(conf_run({"check", "--region", "1:0", "--preset", "identity"}).code == 2);
  CHECK(conf_run({"check", "--region", "a:1", "--preset", "identity"}).code == 2);
  CHECK(conf_run({"check", "--job", "/nonexistent/job.json"}).report()["error"]["kind"] == "IoError");
  CHECK(conf_run({"check", "--bogus"}).code == 2);
  CHECK(conf_run({}).code == 2);
  CHECK(conf_run({"check", "--comp", "x"}).report()["error"]["kind"] == "DimensionMismatch");
  CHECK(conf_run({"check", "--comp", "log(x - 5)", "t"}).report()["error"]["kind"] == "DomainError");
}

TEST_CASE("flags override job fields") {
  const auto r = conf_run({"check", "--job", kJobs + "/swap.json", "--comp", "x", "t", "--grid", "5"}).report();
  CHECK(r["job"]["grid"] == 5);
  CHECK(r["job"]["components"][0] == "x");
  CHECK(r["pass"] == true);
  CHECK(r["checks"][0]["details"]["samples"] == 25 + 32);
}

TEST_CASE("factor, decompose, fit") {
  const auto f = conf_run({"factor", "--job", kJobs + "/factor.json"});
  CHECK(f.code == 0);
  const auto fr = f.report()["checks"][0];
  CHECK(fr["details"]["branch"] == "direct");
  CHECK(fr["details"]["pattern"] == "both-increasing");
  CHECK(fr["residual"].get<double>() <= 1e-9);
  for (const auto& row : fr["details"]["psi"]["table"]) {
    const double s = row[0];
    CHECK(std::abs(row[1].get<double>() - (s * s * s + s)) <= 1e-10);
  }

  const auto shear = conf_run({"factor", "--job", kJobs + "/factor.json", "--comp", "u + v", "v"});
  CHECK(shear.code == 1);
  CHECK(shear.report()["checks"][0]["details"]["error"] == "NotSeparable");

  const auto d = conf_run({"decompose", "--job", kJobs + "/decompose.json"});
  CHECK(d.code == 0);
  CHECK(d.report()["checks"][0]["residual"].get<double>() <= 1e-9);
  CHECK(d.report()["checks"][0]["details"]["f"]["table"].size() == 17);
  const auto nd = conf_run({"decompose", "--job", kJobs + "/decompose.json", "--comp", "x^2*t"});
  CHECK(nd.code == 1);
  CHECK(nd.report()["checks"][0]["details"]["error"] == "NotWaveSolution");

  const auto fit = conf_run({"fit", "--job", kJobs + "/fit.json"});
  CHECK(fit.code == 0);
  const auto fd = fit.report()["checks"][0]["details"];
  CHECK(fd["alpha"].get<double>() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fd["b"][1].get<double>() == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(fit.report()["checks"][1]["name"] == "scaling");

  const auto fs = conf_run({"fit", "--job", kJobs + "/fit_samples.json"});
  CHECK(fs.code == 0);
  CHECK(fs.report()["checks"][0]["details"]["alpha"].get<double>() == doctest::Approx(3.0).epsilon(1e-10));

  const auto shear_fit = conf_run({"fit", "--sig", "2,0", "--comp", "x + y", "y"});
  CHECK(shear_fit.code == 1);
  CHECK(shear_fit.report()["checks"][0]["details"]["error"] == "NotEtaOrthogonal");
}

TEST_CASE("grid: compactification stays inside the diamond") {
  const auto dir = std::filesystem::temp_directory_path() / "conf_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "compact.svg";
  const auto run = conf_run({"grid", "--job", kJobs + "/compactification.json", "--out", path.string()});
  REQUIRE(run.code == 0);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  const std::string svg = slurp(path);
  CHECK(svg.find("viewBox=\"-1.1 -1.1 2.2 2.2\"") != std::string::npos);
  CHECK(svg.find("job_hash") != std::string::npos);
  CHECK(svg.find("points=\"1,0 0,-1 -1,0 0,1 1,0\"") != std::string::npos);

  // Every grid vertex (black polylines) lies strictly inside |X| + |T| < 1.
  const std::string body = svg.substr(0, svg.find("</g>"));
  const std::regex pt(R"((-?[0-9.e+-]+),(-?[0-9.e+-]+))");
  std::size_t count = 0;
  bool inside = true;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), pt); it != std::sregex_iterator(); ++it) {
    const double x = std::stod((*it)[1]), y = std::stod((*it)[2]);
    inside = inside && std::abs(x) + std::abs(y) < 1;
    ++count;
  }
  CHECK(inside);
  CHECK(count == 34 * 64);

  // Same inputs, same bytes.
  const auto again = dir / "again.svg";
  conf_run({"grid", "--job", kJobs + "/compactification.json", "--out", again.string()});
  CHECK(slurp(again) == svg);

  const auto id = conf_run({"grid", "--preset", "identity", "--sig", "2,1", "--frame", "null"});
  CHECK(id.code == 0);
  CHECK(id.out.rfind("<?xml", 0) == 0);
  CHECK(conf_run({"grid", "--preset", "identity", "--sig", "3,1"}).code == 2);
}

TEST_CASE("grid: rectangle equivalence fills the target rectangle") {
  const auto r = conf_run({"grid", "--job", kJobs + "/equivalence.json", "--out",
                           (std::filesystem::temp_directory_path() / "conf_cli_test" / "eq.svg").string()})
                     .report();
  // The 1% margin leaves U in [1.02, 2.98], V in [0.04, 3.96]; X = (U+V)/2, T = (U-V)/2.
  const auto b = r["checks"][0]["details"]["bounds"];
  CHECK(b[0].get<double>() == doctest::Approx((1.02 + 0.04) / 2));
  CHECK(b[1].get<double>() == doctest::Approx((2.98 + 3.96) / 2));
  CHECK(b[2].get<double>() == doctest::Approx((1.02 - 3.96) / 2));
  CHECK(b[3].get<double>() == doctest::Approx((2.98 - 0.04) / 2));
}

TEST_CASE("job parsing") {
  const auto j = cli::job_from_json(json::parse(R"({"signature": [4, 2], "grid": 3, "tolerance": 1e-6})"));
  CHECK(j.n == 4);
  CHECK(j.nu == 2);
  CHECK(j.grid == 3);
  CHECK(j.tolerance == 1e-6);
  auto k = j;
  cli::finalize_job(k);
  CHECK(k.region.size() == 4);
  CHECK_THROWS_AS(cli::job_from_json(json::parse(R"({"frame": "polar"})")), Error);
  CHECK_THROWS_AS(cli::job_from_json(json::parse(R"({"region": [[0]]})")), Error);
  cli::JobSpec bad;
  bad.preset = "nope";
  CHECK_THROWS_AS(cli::finalize_job(bad), Error);
}
