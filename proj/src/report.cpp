#include "geomlab/report.hpp"

#include <fstream>
#include <sstream>

namespace geomlab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os << "[experiment]\n";
  os << "command = " << command << "\n";
  os << "metric_a = " << metric_a << "\n";
  os << "metric_b = " << metric_b << "\n";
  os << "dim = " << dim << "\n";
  os << "radius = " << format17(radius) << "\n";
  os << "grid = " << grid << "\n";
  os << "s_steps = " << s_steps << "\n";
  os << "seed = " << seed << "\n";
  os << "tol = " << format17(tol) << "\n";
  os << "out = " << out << "\n";
  os << "workers = " << workers << "\n";
  if (!extras.empty()) {
    os << "[extra]\n";
    for (const auto& [k, v] : extras) os << k << " = " << v << "\n";
  }
  return os.str();
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig c;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = t.substr(1, t.size() - 2);
      if (section != "experiment" && section != "extra")
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section " + section);
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    try {
      if (section == "extra") {
        c.extras[key] = val;
      } else if (key == "command") {
        c.command = val;
      } else if (key == "metric_a") {
        c.metric_a = val;
      } else if (key == "metric_b") {
        c.metric_b = val;
      } else if (key == "dim") {
        c.dim = std::stoi(val);
      } else if (key == "radius") {
        c.radius = std::stod(val);
      } else if (key == "grid") {
        c.grid = std::stoi(val);
      } else if (key == "s_steps") {
        c.s_steps = std::stoi(val);
      } else if (key == "seed") {
        c.seed = std::stoull(val);
      } else if (key == "tol") {
        c.tol = std::stod(val);
      } else if (key == "out") {
        c.out = val;
      } else if (key == "workers") {
        c.workers = std::stoi(val);
      } else {
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown key " + key);
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("config line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config file not readable: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return from_text(buf.str());
}

void ExperimentConfig::validate() const {
  if (grid < 2) throw ConfigError("config: grid must be >= 2");
  if (s_steps < 2) throw ConfigError("config: s_steps must be >= 2");
  if (tol <= 0.0) throw ConfigError("config: tol must be positive");
  if (workers < 1) throw ConfigError("config: workers must be >= 1");
  if (dim < 1) throw ConfigError("config: dim must be >= 1");
}

double ExperimentConfig::extra_or(const std::string& key, double def) const {
  auto it = extras.find(key);
  return it == extras.end() ? def : std::stod(it->second);
}

int ExperimentConfig::extra_int_or(const std::string& key, int def) const {
  auto it = extras.find(key);
  return it == extras.end() ? def : std::stoi(it->second);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.command == b.command && a.metric_a == b.metric_a && a.metric_b == b.metric_b &&
         a.dim == b.dim && a.radius == b.radius && a.grid == b.grid && a.s_steps == b.s_steps &&
         a.seed == b.seed && a.tol == b.tol && a.out == b.out && a.workers == b.workers &&
         a.extras == b.extras;
}

void CsvWriter::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size())
    throw ConfigError("CsvWriter: row width does not match header");
  std::string r;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) r += ",";
    r += format17(values[i]);
  }
  rows_.push_back(std::move(r));
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size())
    throw ConfigError("CsvWriter: row width does not match header");
  std::string r;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) r += ",";
    r += cells[i];
  }
  rows_.push_back(std::move(r));
}

std::string CsvWriter::str() const {
  std::string s;
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (i) s += ",";
    s += columns_[i];
  }
  s += "\n";
  for (const auto& r : rows_) {
    s += r;
    s += "\n";
  }
  return s;
}

void CsvWriter::write(const std::filesystem::path& path) const { write_text_file(path, str()); }

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
}

std::string plot_script(const std::string& title, const std::string& csv_name,
                        const std::vector<std::pair<int, int>>& xy_columns,
                        const std::vector<std::string>& labels) {
  std::ostringstream os;
  os << "# gnuplot script generated by " << kVersionStamp << "\n";
  os << "set datafile separator ','\n";
  os << "set key autotitle columnhead\n";
  os << "set title '" << title << "'\n";
  os << "set grid\n";
  os << "plot ";
  for (size_t i = 0; i < xy_columns.size(); ++i) {
    if (i) os << ", \\\n     ";
    os << "'" << csv_name << "' using " << xy_columns[i].first << ":" << xy_columns[i].second
       << " with points title '" << labels[i] << "'";
  }
  os << "\n";
  return os.str();
}

}  // namespace geomlab
