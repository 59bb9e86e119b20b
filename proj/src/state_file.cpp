#include "qdiscord/state_file.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace qdiscord {

namespace {

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void malformed(const std::string& what) { throw ArgumentError("state file: " + what); }

}  // namespace

void write_state(std::ostream& out, const DensityMatrix& rho, const std::string& comment) {
  std::ostringstream body;
  body.imbue(std::locale::classic());
  body << "qdiscord-state " << kStateFileVersion << "\n";
  if (!comment.empty()) {
    std::istringstream lines(comment);
    for (std::string l; std::getline(lines, l);) body << "# " << l << "\n";
  }
  body << "labels";
  for (const auto& l : rho.labels()) body << ' ' << l.name << ':' << l.dim;
  body << "\n";

  const Matrix& m = rho.data();
  int count = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != Complex(0.0, 0.0)) ++count;
  body << "entries " << count << "\n";
  body << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != Complex(0.0, 0.0)) body << r << ' ' << c << ' ' << m(r, c).real() << ' ' << m(r, c).imag() << "\n";
  out << body.str();
}

DensityMatrix read_state(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) malformed("empty input");
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    if (!(head >> magic >> version) || magic != "qdiscord-state") malformed("missing 'qdiscord-state' header");
    if (version != kStateFileVersion) malformed("unsupported version " + std::to_string(version));
  }
  if (!next_content_line(in, line)) malformed("missing labels line");
  std::vector<SubsystemLabel> labels;
  {
    std::istringstream ls(line);
    std::string tag, item;
    ls >> tag;
    if (tag != "labels") malformed("expected 'labels'");
    while (ls >> item) {
      const auto colon = item.find(':');
      if (colon == std::string::npos || colon == 0) malformed("bad label '" + item + "'");
      int dim = 0;
      try {
        dim = std::stoi(item.substr(colon + 1));
      } catch (const std::exception&) {
        malformed("bad label dimension in '" + item + "'");
      }
      labels.push_back({item.substr(0, colon), static_cast<int>(labels.size()), dim});
    }
    if (labels.empty()) malformed("no labels");
  }
  long side = 1;
  for (const auto& l : labels) {
    if (l.dim < 2) malformed("label dimension < 2");
    side *= l.dim;
    if (side > 4096) malformed("state too large for dense storage");
  }
  if (!next_content_line(in, line)) malformed("missing entries line");
  long count = 0;
  {
    std::istringstream es(line);
    std::string tag;
    if (!(es >> tag >> count) || tag != "entries" || count < 0) malformed("expected 'entries <count>'");
  }
  Matrix m = Matrix::Zero(side, side);
  for (long k = 0; k < count; ++k) {
    if (!next_content_line(in, line)) malformed("fewer entries than declared");
    std::istringstream es(line);
    es.imbue(std::locale::classic());
    long r = -1, c = -1;
    double re = 0, im = 0;
    if (!(es >> r >> c >> re >> im)) malformed("bad entry line '" + line + "'");
    if (r < 0 || c < 0 || r >= side || c >= side) malformed("entry index out of range");
    m(r, c) = Complex(re, im);
  }
  return DensityMatrix(std::move(labels), std::move(m));
}

void save_state(const std::filesystem::path& path, const DensityMatrix& rho, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_state(out, rho, comment);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

DensityMatrix load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_state(in);
}

}  // namespace qdiscord
