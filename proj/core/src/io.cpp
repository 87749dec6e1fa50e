#include "specthresh/io.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "specthresh/error.hpp"

namespace specthresh::io {

namespace {

using nlohmann::json;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw InputError(fmt::format("line {}: '{}' is not a number", line_no, s));
  return v;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InputError(fmt::format("line {}: '{}' is not an unsigned integer", line_no, s));
  return v;
}

// Parses "key=value key=value" after the leading '#'.
std::vector<std::pair<std::string, std::string>> parse_comment(const std::string& line) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream ss(line.substr(1));
  std::string token;
  while (ss >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    out.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";
  // Shortest representation that parses back to the same double.
  for (int digits = 15; digits <= 17; ++digits) {
    std::string s = fmt::format("{:.{}g}", v, digits);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    if (back == v) return s;
  }
  return fmt::format("{:.17g}", v);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "# period=" << format_number(traj.period()) << " seed=" << traj.seed();
  if (const auto& p = traj.params())
    os << " theta=" << format_number(p->theta) << " sigma=" << format_number(p->sigma);
  else
    os << " source=external";
  os << '\n';
  for (std::size_t c = 0; c < traj.dim(); ++c) os << (c ? "," : "") << 'x' << c;
  os << '\n';
  for (std::size_t i = 0; i < traj.length(); ++i) {
    const auto pt = traj.point(i);
    for (std::size_t c = 0; c < pt.size(); ++c) os << (c ? "," : "") << format_number(pt[c]);
    os << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  double period = kTwoPi;
  std::uint64_t seed = 0;
  std::optional<double> theta;
  std::optional<double> sigma;
  std::size_t dim = 0;
  std::vector<double> coords;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      for (const auto& [key, value] : parse_comment(line)) {
        if (key == "period") period = parse_double(value, line_no);
        else if (key == "seed") seed = parse_u64(value, line_no);
        else if (key == "theta") theta = parse_double(value, line_no);
        else if (key == "sigma") sigma = parse_double(value, line_no);
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      // A header row names the coordinates; a numeric first row is data.
      double probe = 0.0;
      const auto& f = fields.front();
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), probe);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        dim = fields.size();
        continue;
      }
    }
    if (dim == 0) dim = fields.size();
    if (fields.size() != dim)
      throw InputError(fmt::format("line {}: expected {} columns, found {}", line_no, dim,
                                   fields.size()));
    for (const auto& f : fields) coords.push_back(parse_double(f, line_no));
  }
  if (dim == 0) throw InputError("trajectory file has no columns");
  std::optional<OuParams> params;
  if (theta && sigma) params = OuParams{*theta, *sigma, period};
  return Trajectory(dim, std::move(coords), period, seed, params);
}

void write_matrix_csv(std::ostream& os, const CoeffMatrix& m) {
  os << "# dim=" << m.basis.dim << " size_per_axis=" << m.basis.size_per_axis
     << " period=" << format_number(m.basis.period) << '\n';
  for (Eigen::Index i = 0; i < m.side(); ++i) {
    for (Eigen::Index j = 0; j < m.side(); ++j)
      os << (j ? "," : "") << format_number(m.entries(i, j));
    os << '\n';
  }
}

CoeffMatrix read_matrix_csv(std::istream& is) {
  std::optional<BasisSpec> spec;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      BasisSpec s;
      bool any = false;
      for (const auto& [key, value] : parse_comment(line)) {
        if (key == "dim") s.dim = parse_u64(value, line_no), any = true;
        else if (key == "size_per_axis") s.size_per_axis = parse_u64(value, line_no), any = true;
        else if (key == "period") s.period = parse_double(value, line_no);
      }
      if (any) spec = s;
      continue;
    }
    std::vector<double> row;
    for (const auto& f : split(line, ',')) row.push_back(parse_double(f, line_no));
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError(fmt::format("line {}: ragged matrix row", line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("matrix file is empty");
  const std::size_t side = rows.size();
  if (rows.front().size() != side) throw InputError("matrix is not square");
  if (!spec) spec = BasisSpec{1, side, kTwoPi};
  if (spec->size() != side) throw InputError("matrix side does not match its basis header");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return CoeffMatrix(std::move(m), *spec);
}

std::string matrix_json(const CoeffMatrix& m) {
  json j;
  j["dim"] = m.basis.dim;
  j["size_per_axis"] = m.basis.size_per_axis;
  j["period"] = m.basis.period;
  j["entries"] = matrix_rows(m.entries);
  return j.dump(2);
}

std::string report_json(const ThresholdReport& report, const GramCorrection* gram) {
  json j;
  j["alpha"] = report.alpha;
  j["rank"] = report.rank();
  j["kept_count"] = report.kept.size();
  j["singular_values"] = report.spectrum;
  json kept = json::array();
  for (const auto& t : report.kept)
    kept.push_back({{"value", t.value}, {"left", vector_json(t.left)}, {"right", vector_json(t.right)}});
  j["kept"] = std::move(kept);
  if (gram != nullptr) {
    j["gram"] = {{"ill_conditioned", gram->ill_conditioned},
                 {"discarded_eigenvalues", gram->discarded},
                 {"min_eigenvalue", gram->min_eigenvalue},
                 {"max_eigenvalue", gram->max_eigenvalue}};
  }
  return j.dump(2);
}

void write_loss_table_csv(std::ostream& os, const LossTable& table) {
  os << kLossTableHeader << '\n';
  for (const CellStats& c : table.cells) {
    os << c.cell.n << ',' << c.cell.m << ',' << format_number(c.cell.alpha) << ','
       << format_number(c.mean_loss) << ',' << format_number(c.sd_loss) << ','
       << format_number(c.mean_rank) << ',' << c.replications << '\n';
  }
}

LossTable read_loss_table_csv(std::istream& is) {
  LossTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (!header) {
      if (line != kLossTableHeader)
        throw InputError(fmt::format("loss table header must be '{}'", kLossTableHeader));
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) throw InputError(fmt::format("line {}: expected 7 columns", line_no));
    CellStats c;
    c.cell = {parse_u64(f[0], line_no), parse_u64(f[1], line_no), parse_double(f[2], line_no)};
    c.mean_loss = parse_double(f[3], line_no);
    c.sd_loss = parse_double(f[4], line_no);
    c.mean_rank = parse_double(f[5], line_no);
    c.replications = parse_u64(f[6], line_no);
    table.cells.push_back(std::move(c));
  }
  if (!header) throw InputError("loss table is empty");
  return table;
}

std::string loss_table_json(const LossTable& table) {
  json cells = json::array();
  for (const CellStats& c : table.cells) {
    cells.push_back({{"n", c.cell.n},
                     {"m", c.cell.m},
                     {"alpha", c.cell.alpha},
                     {"mean_loss", c.mean_loss},
                     {"sd_loss", c.sd_loss},
                     {"mean_rank", c.mean_rank},
                     {"replications", c.replications}});
  }
  return json{{"cells", std::move(cells)}}.dump(2);
}

void write_grid_csv(std::ostream& os, const DensityGrid& grid) {
  os << "y\\x";
  for (double x : grid.x) os << ',' << format_number(x);
  os << '\n';
  for (std::size_t j = 0; j < grid.y.size(); ++j) {
    os << format_number(grid.y[j]);
    for (std::size_t i = 0; i < grid.x.size(); ++i)
      os << ',' << format_number(grid.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
    os << '\n';
  }
}

DensityGrid read_grid_csv(std::istream& is) {
  DensityGrid g;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> body;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (g.x.empty()) {
      if (f.size() < 2) throw InputError("grid header has no x values");
      for (std::size_t i = 1; i < f.size(); ++i) g.x.push_back(parse_double(f[i], line_no));
      continue;
    }
    if (f.size() != g.x.size() + 1)
      throw InputError(fmt::format("line {}: expected {} columns", line_no, g.x.size() + 1));
    g.y.push_back(parse_double(f[0], line_no));
    std::vector<double> row;
    for (std::size_t i = 1; i < f.size(); ++i) row.push_back(parse_double(f[i], line_no));
    body.push_back(std::move(row));
  }
  if (g.x.empty() || body.empty()) throw InputError("grid file is empty");
  g.values.resize(static_cast<Eigen::Index>(body.size()), static_cast<Eigen::Index>(g.x.size()));
  for (std::size_t j = 0; j < body.size(); ++j)
    for (std::size_t i = 0; i < g.x.size(); ++i)
      g.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = body[j][i];
  return g;
}

}  // namespace specthresh::io
