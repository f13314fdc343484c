#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cbohf/errors.hpp"
#include "cbohf/molecule.hpp"
#include "cbohf/units.hpp"

namespace cbohf {

Molecule parse_xyz(std::string_view text, int charge) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };

  // Leading blank lines are tolerated.
  do {
    if (!next_line()) throw ParseError("empty XYZ input");
  } while (line.find_first_not_of(" \t\r") == std::string::npos);

  int count = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> count) || count <= 0) throw ParseError("expected a positive atom count", line_no);
  }
  if (!next_line()) throw ParseError("missing comment line", line_no + 1);

  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(count));
  const double to_bohr = convert_units(1.0, Unit::Angstrom, Unit::Bohr);
  while (static_cast<int>(atoms.size()) < count) {
    if (!next_line()) throw ParseError("expected " + std::to_string(count) + " atoms", line_no + 1);
    std::istringstream ls(line);
    std::string symbol;
    double x = 0, y = 0, z = 0;
    if (!(ls >> symbol >> x >> y >> z)) throw ParseError("expected 'symbol x y z'", line_no);
    try {
      atoms.emplace_back(symbol, Vec3(x, y, z) * to_bohr);
    } catch (const InvalidInput& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return Molecule(std::move(atoms), charge);
}

Molecule read_xyz_file(const std::string& path, int charge) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open XYZ file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_xyz(buffer.str(), charge);
}

}  // namespace cbohf
