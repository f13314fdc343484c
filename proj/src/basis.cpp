#include "cbohf/basis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "cbohf/errors.hpp"
#include "cbohf/units.hpp"

#ifndef CBOHF_BASIS_DIR
#define CBOHF_BASIS_DIR "data/basis"
#endif

namespace cbohf {
namespace {

double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int shell_letter(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'S': return 0;
    case 'P': return 1;
    case 'D': return 2;
    case 'F': return 3;
    case 'G': return 4;
    default: return -1;
  }
}

// Fortran exponent markers (1.0D+01) are accepted.
bool parse_number(std::string tok, double& out) {
  std::replace(tok.begin(), tok.end(), 'D', 'E');
  std::replace(tok.begin(), tok.end(), 'd', 'e');
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end != tok.c_str() && *end == '\0' && std::isfinite(out);
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> toks;
  std::string t;
  while (ls >> t) toks.push_back(t);
  return toks;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open basis file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<std::array<int, 3>> cartesian_powers(int l) {
  if (l < 0) throw InvalidInput("negative angular momentum");
  std::vector<std::array<int, 3>> out;
  out.reserve(static_cast<std::size_t>(cartesian_count(l)));
  for (int i = l; i >= 0; --i) {
    for (int j = l - i; j >= 0; --j) out.push_back({i, j, l - i - j});
  }
  return out;
}

double BasisShell::component_norm(const std::array<int, 3>& p) {
  return 1.0 / std::sqrt(double_factorial(2 * p[0] - 1) * double_factorial(2 * p[1] - 1) *
                         double_factorial(2 * p[2] - 1));
}

BasisShell BasisShell::make(const Vec3& center, int l, std::vector<double> exponents,
                            const std::vector<double>& raw, std::size_t atom) {
  if (l < 0) throw InvalidInput("negative angular momentum");
  if (exponents.empty()) throw InvalidInput("shell has no primitives");
  if (raw.size() != exponents.size()) throw InvalidInput("exponent/coefficient count mismatch");
  for (double a : exponents) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("primitive exponents must be positive");
  }
  if (!center.allFinite()) throw InvalidInput("non-finite shell center");

  BasisShell sh;
  sh.center = center;
  sh.l = l;
  sh.atom = atom;
  sh.exponents = std::move(exponents);
  sh.coefficients.resize(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const double a = sh.exponents[k];
    sh.coefficients[k] = raw[k] * std::pow(2.0 * a / kPi, 0.75) * std::pow(4.0 * a, 0.5 * l);
  }
  // Self-overlap of the contracted function (same for every component after component_norm).
  double s = 0.0;
  for (std::size_t a = 0; a < raw.size(); ++a) {
    for (std::size_t b = 0; b < raw.size(); ++b) {
      const double p = sh.exponents[a] + sh.exponents[b];
      s += sh.coefficients[a] * sh.coefficients[b] * std::pow(kPi / p, 1.5) / std::pow(2.0 * p, l);
    }
  }
  if (!(s > 0.0)) throw InvalidInput("contracted shell has zero norm");
  const double f = 1.0 / std::sqrt(s);
  for (auto& c : sh.coefficients) c *= f;
  return sh;
}

BasisLibrary BasisLibrary::parse(std::string_view text, std::string name) {
  BasisLibrary lib;
  lib.name_ = std::move(name);

  std::istringstream in{std::string(text)};
  std::string raw_line;
  int line_no = 0;

  // Block being read: element, angular momenta per coefficient column.
  int cur_z = 0;
  std::vector<int> cur_l;
  std::vector<double> exps;
  std::vector<std::vector<double>> cols;
  int header_line = 0;

  auto flush = [&]() {
    if (cur_z == 0) return;
    if (exps.empty()) throw ParseError("shell without primitives", header_line);
    auto& dest = lib.shells_[cur_z];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const int l = cur_l.size() == 1 ? cur_l[0] : cur_l[c];
      // Drop primitives with zero weight in this column (general contractions).
      ShellTemplate t;
      t.l = l;
      for (std::size_t k = 0; k < exps.size(); ++k) {
        if (cols[c][k] != 0.0) {
          t.exponents.push_back(exps[k]);
          t.coefficients.push_back(cols[c][k]);
        }
      }
      if (t.exponents.empty()) throw ParseError("contraction column with only zero coefficients", header_line);
      dest.push_back(std::move(t));
    }
    cur_z = 0;
    cur_l.clear();
    exps.clear();
    cols.clear();
  };

  bool any = false;
  while (std::getline(in, raw_line)) {
    ++line_no;
    std::string line = raw_line;
    const auto hash = line.find_first_of("#!");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto toks = split(line);
    const std::string first = lower(toks[0]);
    if (first == "basis" || first == "end" || first == "spherical" || first == "cartesian") {
      flush();
      continue;
    }

    double v = 0.0;
    if (parse_number(toks[0], v)) {
      if (cur_z == 0) throw ParseError("primitive row outside a shell block", line_no);
      std::vector<double> row;
      for (const auto& t : toks) {
        double x = 0.0;
        if (!parse_number(t, x)) throw ParseError("malformed number '" + t + "'", line_no);
        row.push_back(x);
      }
      const std::size_t ncol = row.size() - 1;
      if (ncol == 0) throw ParseError("primitive row needs an exponent and a coefficient", line_no);
      if (!(row[0] > 0.0)) throw ParseError("non-positive exponent", line_no);
      if (cols.empty()) {
        if (cur_l.size() > 1 && ncol != cur_l.size()) {
          throw ParseError("SP row needs one S and one P coefficient", line_no);
        }
        cols.assign(ncol, {});
      } else if (ncol != cols.size()) {
        throw ParseError("inconsistent number of contraction coefficients", line_no);
      }
      exps.push_back(row[0]);
      for (std::size_t c = 0; c < ncol; ++c) cols[c].push_back(row[c + 1]);
      any = true;
      continue;
    }

    // Shell header: "<symbol> <type>".
    if (toks.size() != 2) throw ParseError("expected '<element> <shell type>' or a primitive row", line_no);
    int z = 0;
    try {
      z = atomic_number(toks[0]);
    } catch (const InvalidInput&) {
      throw ParseError("unknown element '" + toks[0] + "'", line_no);
    }
    const std::string type = lower(toks[1]);
    std::vector<int> ls;
    if (type == "sp" || type == "l") {
      ls = {0, 1};
    } else if (type.size() == 1 && shell_letter(type[0]) >= 0) {
      ls = {shell_letter(type[0])};
    } else {
      throw ParseError("unsupported shell type '" + toks[1] + "'", line_no);
    }
    flush();
    cur_z = z;
    cur_l = ls;
    header_line = line_no;
  }
  flush();
  if (!any) throw ParseError("basis input contains no shells");
  return lib;
}

const std::vector<BasisLibrary::ShellTemplate>& BasisLibrary::shells(int z) const {
  auto it = shells_.find(z);
  if (it == shells_.end()) {
    throw ParseError("basis '" + name_ + "' has no entry for element " + element_symbol(z));
  }
  return it->second;
}

std::vector<int> BasisLibrary::elements() const {
  std::vector<int> out;
  for (const auto& [z, _] : shells_) out.push_back(z);
  return out;
}

std::vector<BasisShell> BasisLibrary::assign(const Molecule& molecule) const {
  std::vector<BasisShell> out;
  for (std::size_t i = 0; i < molecule.size(); ++i) {
    const auto& atom = molecule.atoms()[i];
    for (const auto& t : shells(atom.charge)) {
      out.push_back(BasisShell::make(atom.position, t.l, t.exponents, t.coefficients, i));
    }
  }
  return out;
}

BasisLibrary load_basis_library(std::string_view name_or_path) {
  static std::mutex mutex;
  static std::map<std::string, BasisLibrary> cache;

  const std::string key = lower(name_or_path);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  BasisLibrary lib;
  if (key == "sto-3g" || key == "sto3g") {
    lib = BasisLibrary::parse(detail::kSto3g, "sto-3g");
  } else if (key == "6-31g") {
    lib = BasisLibrary::parse(detail::k631g, "6-31g");
  } else {
    namespace fs = std::filesystem;
    std::vector<fs::path> candidates;
    if (const char* env = std::getenv("CBOHF_BASIS_DIR")) candidates.emplace_back(fs::path(env) / (key + ".nw"));
    candidates.emplace_back(fs::path(CBOHF_BASIS_DIR) / (key + ".nw"));
    candidates.emplace_back(std::string(name_or_path));
    const fs::path* found = nullptr;
    for (const auto& c : candidates) {
      std::error_code ec;
      if (fs::is_regular_file(c, ec)) {
        found = &c;
        break;
      }
    }
    if (!found) throw InvalidInput("unknown basis set or missing file '" + std::string(name_or_path) + "'");
    lib = BasisLibrary::parse(read_file(*found), key);
  }

  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, lib);
  return lib;
}

std::vector<BasisShell> parse_basis(std::string_view text, const Molecule& molecule) {
  return BasisLibrary::parse(text).assign(molecule);
}

std::vector<BasisShell> make_basis(std::string_view name_or_path, const Molecule& molecule) {
  return load_basis_library(name_or_path).assign(molecule);
}

int basis_function_count(const std::vector<BasisShell>& shells) {
  int n = 0;
  for (const auto& s : shells) n += s.size();
  return n;
}

std::vector<int> shell_offsets(const std::vector<BasisShell>& shells) {
  std::vector<int> off;
  off.reserve(shells.size());
  int n = 0;
  for (const auto& s : shells) {
    off.push_back(n);
    n += s.size();
  }
  return off;
}

}  // namespace cbohf
