#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "finsent/eval.hpp"
#include "finsent/serialize.hpp"

using namespace finsent;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class CliFixture {
 public:
  CliFixture() {
    dir_ = fs::temp_directory_path() / ("finsent_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~CliFixture() { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path write(const std::string& name, const std::string& content) const {
    const fs::path p = path(name);
    std::ofstream out(p);
    out << content;
    return p;
  }

  fs::path write_json(const std::string& name, const json& j) const {
    return write(name, j.dump(2) + "\n");
  }

  RunResult run(const std::string& args) const {
    const fs::path out = path("stdout.txt");
    const fs::path err = path("stderr.txt");
    const std::string cmd = std::string(FINSENT_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

 private:
  fs::path dir_;
  static int counter_;
};

int CliFixture::counter_ = 0;

json scored_sample() {
  const std::vector<std::tuple<std::string, std::string, double>> rows{
      {"Acme", "Acme stock soars after strong report", 0.8},
      {"Acme", "Acme profit beats forecast", 0.5},
      {"Globex", "Globex shares steady on mixed update", 0.0},
      {"Globex", "Globex stock slips after weak report", -0.4},
      {"Initech", "Initech shares crash on poor forecast", -0.8},
      {"Initech", "Initech stock soars on merger talks", 0.8},
      {"Acme", "Acme shares slip after mixed quarter", -0.3},
      {"Globex", "Globex profit beats estimates again", 0.5},
      {"Initech", "Initech profit misses forecast badly", -0.5},
      {"Acme", "Acme stock steady after quiet week", 0.0}};
  json arr = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    arr.push_back({{"id", "h" + std::to_string(i)},
                   {"company", std::get<0>(rows[i])},
                   {"title", std::get<1>(rows[i])},
                   {"sentiment", std::get<2>(rows[i])}});
  }
  return arr;
}

json ngram_ols_config() {
  return {{"vectorizer", {{"kind", "ngram"}, {"n_min", 1}, {"n_max", 2}}},
          {"regressor", {{"kind", "ols"}}},
          {"seed", 13}};
}

}  // namespace

TEST_CASE("train writes a bundle and reports a summary") {
  CliFixture fx;
  const auto config = fx.write_json("config.json", ngram_ols_config());
  const auto data = fx.write_json("train.json", scored_sample());
  const auto r = fx.run("train --config " + config.string() + " --data " + data.string() +
                        " --model " + fx.path("model.json").string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(fx.path("model.json")));
  CHECK(r.out.find("trained 10 records") != std::string::npos);
}

TEST_CASE("train rejects invalid configs naming the field") {
  CliFixture fx;
  json bad = ngram_ols_config();
  bad["vectorizer"]["n_min"] = 3;
  bad["vectorizer"]["n_max"] = 1;
  const auto config = fx.write_json("config.json", bad);
  const auto data = fx.write_json("train.json", scored_sample());
  const auto r = fx.run("train --config " + config.string() + " --data " + data.string() +
                        " --model " + fx.path("model.json").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("n_max") != std::string::npos);
}

TEST_CASE("train rejects unscored records listing their ids") {
  CliFixture fx;
  json data = scored_sample();
  data[3].erase("sentiment");
  data[7].erase("sentiment");
  const auto config = fx.write_json("config.json", ngram_ols_config());
  const auto path = fx.write_json("train.json", data);
  const auto r = fx.run("train --config " + config.string() + " --data " + path.string() +
                        " --model " + fx.path("model.json").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("h3") != std::string::npos);
  CHECK(r.err.find("h7") != std::string::npos);
}

TEST_CASE("retraining with the same seed is byte-identical") {
  CliFixture fx;
  const auto config = fx.write_json("config.json", ngram_ols_config());
  const auto data = fx.write_json("train.json", scored_sample());
  const std::string base = "train --config " + config.string() + " --data " + data.string();
  CHECK(fx.run(base + " --model " + fx.path("m1.json").string()).exit_code == 0);
  CHECK(fx.run(base + " --model " + fx.path("m2.json").string()).exit_code == 0);
  CHECK(slurp(fx.path("m1.json")) == slurp(fx.path("m2.json")));
}

TEST_CASE("predict clips, preserves order, and handles empty and OOV inputs") {
  CliFixture fx;
  const auto config = fx.write_json("config.json", ngram_ols_config());
  const auto data = fx.write_json("train.json", scored_sample());
  REQUIRE(fx.run("train --config " + config.string() + " --data " + data.string() + " --model " +
                 fx.path("model.json").string())
              .exit_code == 0);

  SUBCASE("predictions on the training inputs stay in range and in order") {
    const auto r = fx.run("predict --model " + fx.path("model.json").string() + " --data " +
                          data.string() + " --out " + fx.path("pred.json").string());
    CHECK(r.exit_code == 0);
    const json pred = json::parse(slurp(fx.path("pred.json")));
    REQUIRE(pred.size() == 10);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      CHECK(pred[i]["id"] == "h" + std::to_string(i));
      const double s = pred[i]["sentiment"].get<double>();
      CHECK(s >= -1.0);
      CHECK(s <= 1.0);
    }
  }
  SUBCASE("empty input produces an empty array") {
    const auto empty = fx.write("empty.json", "[]\n");
    const auto r = fx.run("predict --model " + fx.path("model.json").string() + " --data " +
                          empty.string() + " --out " + fx.path("pred.json").string());
    CHECK(r.exit_code == 0);
    CHECK(json::parse(slurp(fx.path("pred.json"))) == json::array());
  }
  SUBCASE("an all-OOV headline gets the clipped model bias") {
    const auto oov = fx.write_json(
        "oov.json",
        json::array({{{"id", "x"}, {"company", "Zzz"}, {"title", "qqq www eee"}}}));
    const auto r = fx.run("predict --model " + fx.path("model.json").string() + " --data " +
                          oov.string() + " --out " + fx.path("pred.json").string());
    CHECK(r.exit_code == 0);
    const json pred = json::parse(slurp(fx.path("pred.json")));
    const json bundle = json::parse(slurp(fx.path("model.json")));
    const double bias = bundle["payload"]["regressor"]["payload"]["bias"].get<double>();
    const double expected = std::min(1.0, std::max(-1.0, bias));
    CHECK(pred[0]["sentiment"].get<double>() ==
          doctest::Approx(expected).epsilon(5e-7).scale(1.0));
  }
}

TEST_CASE("evaluate scores predictions against gold by id") {
  CliFixture fx;
  const auto gold = fx.write_json("gold.json", scored_sample());

  SUBCASE("identity predictions score a perfect cosine") {
    json pred = json::array();
    for (const auto& r : scored_sample())
      pred.push_back({{"id", r["id"]}, {"sentiment", r["sentiment"]}});
    const auto path = fx.write_json("pred.json", pred);
    const auto run = fx.run("evaluate --gold " + gold.string() + " --pred " + path.string());
    CHECK(run.exit_code == 0);
    const json report = json::parse(run.out);
    CHECK(report["cosine_score"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report["r2"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report["n"] == 10);
  }
  SUBCASE("half coverage halves the cosine score") {
    json pred = json::array();
    const json sample = scored_sample();
    for (std::size_t i = 0; i < 5; ++i)
      pred.push_back({{"id", sample[i]["id"]}, {"sentiment", sample[i]["sentiment"]}});
    const auto path = fx.write_json("pred.json", pred);
    const auto run = fx.run("evaluate --gold " + gold.string() + " --pred " + path.string());
    CHECK(run.exit_code == 0);
    const json report = json::parse(run.out);
    CHECK(report["cosine_weight"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report["cosine_score"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("a prediction id outside the gold set is an error") {
    const auto path = fx.write_json(
        "pred.json", json::array({{{"id", "ghost"}, {"sentiment", 0.1}}}));
    const auto run = fx.run("evaluate --gold " + gold.string() + " --pred " + path.string());
    CHECK(run.exit_code == 2);
    CHECK(run.err.find("ghost") != std::string::npos);
  }
  SUBCASE("constant gold reports the degenerate marker") {
    json const_gold = json::array();
    json pred = json::array();
    for (int i = 0; i < 3; ++i) {
      const_gold.push_back({{"id", std::to_string(i)},
                            {"company", "A"},
                            {"title", "title here"},
                            {"sentiment", 0.5}});
      pred.push_back({{"id", std::to_string(i)}, {"sentiment", 0.2 + 0.1 * i}});
    }
    const auto gpath = fx.write_json("gold2.json", const_gold);
    const auto ppath = fx.write_json("pred2.json", pred);
    const auto run = fx.run("evaluate --gold " + gpath.string() + " --pred " + ppath.string());
    CHECK(run.exit_code == 0);
    const json report = json::parse(run.out);
    CHECK(report["r2"] == "degenerate");
    CHECK(report["cosine"].is_number());
  }
}

TEST_CASE("cv prints per-fold and mean reports") {
  CliFixture fx;
  const auto config = fx.write_json("config.json", ngram_ols_config());
  const auto data = fx.write_json("train.json", scored_sample());
  const auto r = fx.run("cv --config " + config.string() + " --data " + data.string() +
                        " --folds 5");
  CHECK(r.exit_code == 0);
  const json out = json::parse(r.out);
  CHECK(out["k"] == 5);
  CHECK(out["folds"].size() == 5);
  CHECK(out["mean"].contains("cosine_score"));
}

TEST_CASE("usage errors exit with code 2") {
  CliFixture fx;
  CHECK(fx.run("train --config missing.json").exit_code == 2);  // required flags absent
  CHECK(fx.run("frobnicate").exit_code == 2);
  CHECK(fx.run("--help").exit_code == 0);
}

TEST_CASE("cv rejects k = 1") {
  CliFixture fx;
  const auto config = fx.write_json("config.json", ngram_ols_config());
  const auto data = fx.write_json("train.json", scored_sample());
  const auto r = fx.run("cv --config " + config.string() + " --data " + data.string() +
                        " --folds 1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("sweep ranks the grid and tolerates failing cells") {
  CliFixture fx;
  json pv_vec = {{"kind", "pv"}, {"dim", 8}, {"epochs", 4}, {"seed", 3}};
  json broken_vec = {{"kind", "ngram"}, {"n_min", 3}, {"n_max", 1}};
  const json grid = {
      {"folds", 5},
      {"seed", 11},
      {"grid", json::array({
                   {{"vectorizer", {{"kind", "ngram"}}}, {"regressor", {{"kind", "ols"}}}},
                   {{"vectorizer", pv_vec}, {"regressor", {{"kind", "ols"}}}},
                   {{"vectorizer", broken_vec}, {"regressor", {{"kind", "ols"}}}},
               })}};
  const auto grid_path = fx.write_json("grid.json", grid);
  const auto data = fx.write_json("train.json", scored_sample());
  const auto r = fx.run("sweep --config " + grid_path.string() + " --data " + data.string() +
                        " --out " + fx.path("results.json").string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("Vectorization Method") != std::string::npos);

  const json results = json::parse(slurp(fx.path("results.json")));
  REQUIRE(results["results"].size() == 3);
  CHECK(results["results"][0]["error"].is_null());
  // The invalid cell sinks to the bottom with its error note.
  CHECK(results["results"][2]["error"].is_string());
  CHECK(results["results"][2]["mean"].is_null());
}

TEST_CASE("a nine-cell sweep covers every vectorizer/regressor pairing") {
  CliFixture fx;
  json grid_cells = json::array();
  const json vectorizers = json::array(
      {{{"kind", "ngram"}, {"n_min", 1}, {"n_max", 2}},
       {{"kind", "tfidf"}, {"n_min", 1}, {"n_max", 1}},
       {{"kind", "pv"}, {"dim", 8}, {"epochs", 4}, {"seed", 3}}});
  const json regressors = json::array({{{"kind", "ols"}},
                                       {{"kind", "svr"}, {"epochs", 40}},
                                       {{"kind", "gbm"}, {"rounds", 15}}});
  for (const auto& v : vectorizers)
    for (const auto& r : regressors)
      grid_cells.push_back({{"vectorizer", v}, {"regressor", r}});

  const json grid = {{"folds", 5}, {"seed", 11}, {"grid", grid_cells}};
  const auto grid_path = fx.write_json("grid.json", grid);
  const auto data = fx.write_json("train.json", scored_sample());
  const auto run = fx.run("sweep --config " + grid_path.string() + " --data " + data.string() +
                          " --out " + fx.path("results.json").string());
  CHECK(run.exit_code == 0);

  const json results = json::parse(slurp(fx.path("results.json")));
  REQUIRE(results["results"].size() == 9);
  for (const auto& row : results["results"]) {
    CHECK(row.contains("vectorizer"));
    CHECK(row.contains("learner"));
    CHECK(row["mean"].contains("r2"));
    CHECK(row["mean"].contains("cosine_score"));
    CHECK(row["folds"].size() == 5);
  }
  // One header plus nine ranked rows in the text table.
  int lines = 0;
  for (char c : run.out)
    if (c == '\n') ++lines;
  CHECK(lines == 11);  // header, separator, nine rows
}

TEST_CASE("the full CLI round trip matches the eval module to 1e-9") {
  CliFixture fx;
  const auto config = fx.write_json("config.json", ngram_ols_config());
  const auto data = fx.write_json("train.json", scored_sample());
  REQUIRE(fx.run("train --config " + config.string() + " --data " + data.string() + " --model " +
                 fx.path("model.json").string())
              .exit_code == 0);
  REQUIRE(fx.run("predict --model " + fx.path("model.json").string() + " --data " +
                 data.string() + " --out " + fx.path("pred.json").string())
              .exit_code == 0);
  const auto run = fx.run("evaluate --gold " + data.string() + " --pred " +
                          fx.path("pred.json").string());
  REQUIRE(run.exit_code == 0);
  const json cli_report = json::parse(run.out);

  // Direct eval-module computation on the same emitted vectors.
  const json pred = json::parse(slurp(fx.path("pred.json")));
  const json gold = scored_sample();
  DenseVector g(gold.size()), p(pred.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    g[static_cast<Eigen::Index>(i)] = gold[i]["sentiment"].get<double>();
    p[static_cast<Eigen::Index>(i)] = pred[i]["sentiment"].get<double>();
  }
  const EvalReport direct = evaluate_pair({g, p, static_cast<int>(gold.size())});
  CHECK(cli_report["r2"].get<double>() == doctest::Approx(*direct.r2).epsilon(1e-9));
  CHECK(cli_report["cosine"].get<double>() == doctest::Approx(direct.cosine).epsilon(1e-9));
  CHECK(cli_report["cosine_score"].get<double>() ==
        doctest::Approx(direct.cosine_score).epsilon(1e-9));
}

TEST_CASE("commands are deterministic end to end") {
  CliFixture fx;
  const auto config = fx.write_json("config.json", ngram_ols_config());
  const auto data = fx.write_json("train.json", scored_sample());
  REQUIRE(fx.run("train --config " + config.string() + " --data " + data.string() + " --model " +
                 fx.path("model.json").string())
              .exit_code == 0);
  const std::string predict_cmd = "predict --model " + fx.path("model.json").string() +
                                  " --data " + data.string() + " --out ";
  REQUIRE(fx.run(predict_cmd + fx.path("p1.json").string()).exit_code == 0);
  REQUIRE(fx.run(predict_cmd + fx.path("p2.json").string()).exit_code == 0);
  CHECK(slurp(fx.path("p1.json")) == slurp(fx.path("p2.json")));

  const std::string cv_cmd = "cv --config " + config.string() + " --data " + data.string() +
                             " --folds 5 --seed 3";
  const auto c1 = fx.run(cv_cmd);
  const auto c2 = fx.run(cv_cmd);
  CHECK(c1.out == c2.out);
}
