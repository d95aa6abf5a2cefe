#include "fpcaload/cli/model_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fpcaload/csv.hpp"
#include "fpcaload/error.hpp"

namespace fpcaload::cli {

namespace {

std::string full(double v) { return csv::format_number(v, 17); }

template <typename Vec> void put_values(std::ostream &out, const Vec &v) {
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(v.size()); ++i) {
    out << ' ' << full(v[i]);
  }
  out << '\n';
}

class LineReader {
public:
  LineReader(std::istream &in, std::string source) : in_(in), source_(std::move(source)) {}

  /// Next non-empty line split on whitespace; the first token must be `key`.
  std::vector<std::string> expect(const std::string &key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) {
        tokens.push_back(t);
      }
      if (tokens.empty()) {
        continue;
      }
      if (tokens[0] != key) {
        fail("expected '" + key + "', found '" + tokens[0] + "'");
      }
      tokens.erase(tokens.begin());
      return tokens;
    }
    fail("unexpected end of file, expected '" + key + "'");
  }

  std::string rest_of(const std::string &key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (csv::trim(line).empty()) {
        continue;
      }
      if (line.compare(0, key.size() + 1, key + " ") != 0) {
        fail("expected '" + key + "'");
      }
      return std::string(csv::trim(std::string_view(line).substr(key.size() + 1)));
    }
    fail("unexpected end of file, expected '" + key + "'");
  }

  double number(const std::string &token) {
    return csv::parse_double(token, source_ + ":" + std::to_string(line_));
  }
  std::size_t count(const std::string &token) {
    const long v = csv::parse_integer(token, source_ + ":" + std::to_string(line_));
    if (v < 0) {
      fail("negative count");
    }
    return static_cast<std::size_t>(v);
  }
  Eigen::VectorXd vector(const std::vector<std::string> &tokens, std::size_t offset,
                         std::size_t expected) {
    if (tokens.size() != offset + expected) {
      fail("expected " + std::to_string(expected) + " values, found " +
           std::to_string(tokens.size() - std::min(offset, tokens.size())));
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i) {
      v[static_cast<Eigen::Index>(i)] = number(tokens[offset + i]);
    }
    return v;
  }
  std::size_t single_count(const std::string &key) {
    const auto t = expect(key);
    if (t.size() != 1) {
      fail("'" + key + "' takes one value");
    }
    return count(t[0]);
  }
  double single_number(const std::string &key) {
    const auto t = expect(key);
    if (t.size() != 1) {
      fail("'" + key + "' takes one value");
    }
    return number(t[0]);
  }

  [[noreturn]] void fail(const std::string &msg) const {
    throw Error(ErrorCode::Parse, source_ + ":" + std::to_string(line_) + ": " + msg);
  }

private:
  std::istream &in_;
  std::string source_;
  std::size_t line_ = 0;
};

} // namespace

std::string file_stem(const std::string &entity_id) {
  std::string out;
  for (char c : entity_id) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
  }
  return out.empty() ? "entity" : out;
}

void write_model(std::ostream &out, const StoredModel &model) {
  const FpcaModel &f = model.fpca;
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "entity " << f.entity_id << '\n';
  out << "grid " << f.grid.size();
  for (double t : f.grid.points()) {
    out << ' ' << full(t);
  }
  out << '\n';
  out << "scale " << (f.scale ? full(*f.scale) : "none") << '\n';
  out << "calendar_origin " << format_date(model.calendar_origin) << '\n';
  out << "n_train " << f.n_train << '\n';
  out << "rank_deficient " << (f.rank_deficient ? 1 : 0) << '\n';
  out << "total_variance " << full(f.total_variance) << '\n';
  out << "components " << f.p() << '\n';
  out << "eigenvalues";
  put_values(out, f.eigenvalues);
  out << "mean";
  put_values(out, f.mean);
  for (std::size_t k = 0; k < f.p(); ++k) {
    out << "component " << (k + 1);
    put_values(out, f.components.col(static_cast<Eigen::Index>(k)));
  }
  out << "score_models " << model.score_models.size() << '\n';
  for (const auto &sm : model.score_models) {
    out << "score_model " << sm.component << '\n';
    out << "terms";
    for (const auto &t : sm.term_names()) {
      out << ' ' << t;
    }
    out << '\n' << "columns";
    for (const auto &c : sm.columns) {
      out << ' ' << c;
    }
    out << '\n' << "coefficients";
    put_values(out, sm.coefficients);
    out << "estimated";
    for (bool e : sm.estimated) {
      out << ' ' << (e ? 1 : 0);
    }
    out << '\n';
    out << "rss " << full(sm.rss) << '\n';
    out << "n_train " << sm.n_train << '\n';
    out << "n_parameters " << sm.n_parameters << '\n';
    out << "aic " << full(sm.aic) << '\n';
  }
  out << "end\n";
}

void save_model(const std::filesystem::path &path, const StoredModel &model) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
  write_model(out, model);
}

StoredModel read_model(std::istream &in, const std::string &source) {
  LineReader r(in, source);
  StoredModel model;
  FpcaModel &f = model.fpca;

  const auto magic = r.expect(kModelMagic);
  if (magic.size() != 1 || magic[0] != std::to_string(kModelVersion)) {
    throw Error(ErrorCode::ModelVersion,
                source + ": unsupported model version '" + (magic.empty() ? "" : magic[0]) +
                    "', expected " + std::to_string(kModelVersion));
  }
  f.entity_id = r.rest_of("entity");
  {
    const auto g = r.expect("grid");
    if (g.empty()) {
      r.fail("grid needs a size");
    }
    const std::size_t m = r.count(g[0]);
    const Eigen::VectorXd pts = r.vector(g, 1, m);
    try {
      f.grid = TimeGrid(std::vector<double>(pts.data(), pts.data() + pts.size()));
    } catch (const Error &e) {
      r.fail(e.what());
    }
  }
  {
    const auto s = r.expect("scale");
    if (s.size() != 1) {
      r.fail("scale takes one value");
    }
    if (s[0] != "none") {
      f.scale = r.number(s[0]);
    }
  }
  try {
    model.calendar_origin = parse_date(r.rest_of("calendar_origin"));
  } catch (const Error &e) {
    r.fail(e.what());
  }
  f.n_train = r.single_count("n_train");
  f.rank_deficient = r.single_count("rank_deficient") != 0;
  f.total_variance = r.single_number("total_variance");
  const std::size_t p = r.single_count("components");
  const std::size_t m = f.grid.size();
  if (p > m) {
    r.fail("more components than grid points");
  }
  f.eigenvalues = r.vector(r.expect("eigenvalues"), 0, p);
  f.mean = r.vector(r.expect("mean"), 0, m);
  f.components.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
  for (std::size_t k = 0; k < p; ++k) {
    const auto c = r.expect("component");
    if (c.empty() || r.count(c[0]) != k + 1) {
      r.fail("components out of order");
    }
    f.components.col(static_cast<Eigen::Index>(k)) = r.vector(c, 1, m);
  }
  const std::size_t n_models = r.single_count("score_models");
  for (std::size_t i = 0; i < n_models; ++i) {
    ScoreRegressionModel sm;
    sm.component = r.single_count("score_model");
    try {
      sm.design = DesignSpec::from_names(r.expect("terms"));
    } catch (const Error &e) {
      r.fail(e.what());
    }
    sm.columns = r.expect("columns");
    if (sm.columns != sm.design.column_names()) {
      r.fail("columns do not match the listed terms");
    }
    sm.coefficients = r.vector(r.expect("coefficients"), 0, sm.columns.size());
    const auto est = r.expect("estimated");
    if (est.size() != sm.columns.size()) {
      r.fail("estimated flags do not match the columns");
    }
    for (const auto &e : est) {
      sm.estimated.push_back(r.count(e) != 0);
    }
    sm.rss = r.single_number("rss");
    sm.n_train = r.single_count("n_train");
    sm.n_parameters = r.single_count("n_parameters");
    sm.aic = r.single_number("aic");
    if (sm.component == 0 || sm.component > p) {
      r.fail("score model component outside the fitted basis");
    }
    model.score_models.push_back(std::move(sm));
  }
  r.expect("end");
  return model;
}

StoredModel load_model(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  return read_model(in, path.string());
}

} // namespace fpcaload::cli
