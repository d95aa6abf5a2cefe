// Benchmark acceptance on the EUNITE 1997-1998 load data: train on 1997,
// forecast 1998 with four components on the two-hourly grid.
//
// Usage: fpcaload_acceptance_eunite <load file or directory>
// The path may also come from the FPCALOAD_EUNITE_DATA environment variable.
// Without data every criterion is reported as FAIL.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fpcaload/cli/commands.hpp"
#include "fpcaload/cli/model_io.hpp"
#include "fpcaload/csv.hpp"
#include "fpcaload/fpca.hpp"

namespace fs = std::filesystem;
using namespace fpcaload;

namespace {

struct Line {
  bool pass;
  std::string label;
  std::string detail;
};

void print(const Line &l) {
  std::cout << (l.pass ? "PASS" : "FAIL") << "  " << l.label << " -- " << l.detail << std::endl;
}

const char *kBenchmark = "criterion 1: EUNITE 1998 forecast indices";
const char *kTheta = "criterion 2: EUNITE explained variability";
const char *kTerms = "criterion 3: EUNITE component-1 model terms";

// Concatenates every .txt/.csv file of a directory into one load table.
fs::path gather(const fs::path &source, const fs::path &work) {
  if (!fs::is_directory(source)) {
    return source;
  }
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(source)) {
    const auto ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".txt" || ext == ".csv")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  const fs::path merged = work / "eunite_load.txt";
  std::ofstream out(merged, std::ios::binary);
  for (const auto &f : files) {
    std::ifstream in(f, std::ios::binary);
    out << in.rdbuf() << '\n';
  }
  return merged;
}

std::map<std::string, std::string> summary_row(const fs::path &path) {
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  const auto keys = csv::split(header);
  const auto values = csv::split(row);
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < keys.size() && i < values.size(); ++i) {
    out[keys[i]] = values[i];
  }
  return out;
}

} // namespace

int main(int argc, char **argv) {
  std::string source = argc > 1 ? argv[1] : "";
  if (source.empty()) {
    if (const char *env = std::getenv("FPCALOAD_EUNITE_DATA")) {
      source = env;
    }
  }
  if (source.empty() || !fs::exists(source)) {
    const std::string why = source.empty()
                                ? "EUNITE load data not configured (set FPCALOAD_EUNITE_DATA)"
                                : "EUNITE load data not found at " + source;
    for (const char *label : {kBenchmark, kTheta, kTerms}) {
      print({false, label, why});
    }
    return 1;
  }

  const fs::path work = fs::temp_directory_path() / ("fpcaload-eunite-" + std::to_string(std::rand()));
  fs::create_directories(work);
  const fs::path load = gather(source, work);
  const std::string out = (work / "out").string();
  std::ostringstream log;
  const std::vector<std::vector<std::string>> steps = {
      {"ingest", "--output", out, "--grid", "two-hourly"},
      {"fit", "--output", out, "--train-range", "1997-01-01:1997-12-31", "--components", "4"},
      {"predict", "--output", out, "--test-range", "1998-01-01:1998-12-31"},
      {"evaluate", "--output", out, "--skip-missing-actual"},
  };
  for (auto args : steps) {
    if (args[0] == "ingest") {
      fs::create_directories(work);
      std::ofstream(work / "eunite.cfg") << "eunite_load = " << fs::absolute(load).string() << "\n";
      args.insert(args.begin() + 1, {"--config", (work / "eunite.cfg").string()});
    }
    const int code = cli::run_cli(args, log, log);
    if (code != 0) {
      for (const char *label : {kBenchmark, kTheta, kTerms}) {
        print({false, label, args[0] + " exited " + std::to_string(code) + ": " + log.str()});
      }
      fs::remove_all(work);
      return 1;
    }
  }

  bool ok = true;
  const auto s = summary_row(fs::path(out) / "evaluation_summary.csv");
  const auto value = [&](const std::string &k) { return s.count(k) && !s.at(k).empty() ? std::stod(s.at(k)) : std::nan(""); };
  const double mape = value("mape"), mae = value("mae"), nmse = value("nmse"), rep = value("rep"), ppmcc = value("ppmcc");
  const bool within = mape <= 6.0 && mae <= 36.0 && nmse <= 0.2 && rep <= 7.0 && ppmcc >= 0.90;
  const int better = (mape < 7.0) + (mae < 43.0) + (nmse < 0.5) + (rep < 8.7) + (ppmcc > 0.88);
  char buf[256];
  std::snprintf(buf, sizeof buf, "MAPE %.2f MAE %.2f NMSE %.3f REP %.2f PPMCC %.3f; better than SVP+SVB on %d/5",
                mape, mae, nmse, rep, ppmcc, better);
  print({within && better >= 4, kBenchmark, buf});
  ok &= within && better >= 4;

  const cli::StoredModel model = cli::load_model(fs::path(out) / "model_eunite.txt");
  const double t1 = explained_variability(model.fpca, 1);
  const double t4 = explained_variability(model.fpca, 4);
  std::snprintf(buf, sizeof buf, "theta(1) = %.4f (> 0.93), theta(4) = %.4f (> 0.99)", t1, t4);
  print({t1 > 0.93 && t4 > 0.99, kTheta, buf});
  ok &= t1 > 0.93 && t4 > 0.99;

  const auto names = model.score_models.at(0).term_names();
  std::string listed;
  for (const auto &n : names) {
    listed += (listed.empty() ? "" : ", ") + n;
  }
  const bool has_terms = std::count(names.begin(), names.end(), "month") && std::count(names.begin(), names.end(), "day_of_week");
  print({has_terms, kTerms, "selected: " + listed});
  ok &= has_terms;

  fs::remove_all(work);
  return ok ? 0 : 1;
}
