#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cbohf/molecule.hpp"

namespace cbohf {

/// Cartesian exponent triples of a shell in canonical order (xx, xy, xz, yy, yz, zz for l = 2).
std::vector<std::array<int, 3>> cartesian_powers(int l);
inline int cartesian_count(int l) { return (l + 1) * (l + 2) / 2; }

/// Contracted Cartesian Gaussian shell.
///
/// `coefficients` already include the radial primitive normalization and the
/// contraction renormalization; the per-component factor returned by
/// `component_norm` completes the normalization so that every Cartesian
/// function has unit self-overlap.
struct BasisShell {
  Vec3 center = Vec3::Zero();
  int l = 0;
  std::vector<double> exponents;
  std::vector<double> coefficients;
  std::size_t atom = 0;

  /// Builds a shell from raw contraction coefficients referring to normalized primitives.
  static BasisShell make(const Vec3& center, int l, std::vector<double> exponents,
                         const std::vector<double>& raw_coefficients, std::size_t atom = 0);

  int size() const { return cartesian_count(l); }
  std::size_t primitives() const { return exponents.size(); }
  static double component_norm(const std::array<int, 3>& powers);
};

/// Element-wise shell templates parsed from a basis file.
class BasisLibrary {
 public:
  struct ShellTemplate {
    int l = 0;
    std::vector<double> exponents;
    std::vector<double> coefficients;
  };

  /// Parses the NWChem-style exchange format: "Sym  S|P|D|F|G|SP" headers
  /// followed by "exponent coefficient..." rows.  General contractions
  /// (several coefficient columns) become separate shells.
  static BasisLibrary parse(std::string_view text, std::string name = "custom");

  bool has(int z) const { return shells_.count(z) != 0; }
  const std::vector<ShellTemplate>& shells(int z) const;
  const std::string& name() const noexcept { return name_; }
  std::vector<int> elements() const;

  /// Shells for every atom of the molecule, in atom order.
  std::vector<BasisShell> assign(const Molecule& molecule) const;

 private:
  std::string name_;
  std::map<int, std::vector<ShellTemplate>> shells_;
};

/// Resolves "sto-3g" and "6-31g" (built in), other names from the basis data
/// directory (e.g. "aug-cc-pvdz"), or a filesystem path.
BasisLibrary load_basis_library(std::string_view name_or_path);

std::vector<BasisShell> parse_basis(std::string_view text, const Molecule& molecule);
std::vector<BasisShell> make_basis(std::string_view name_or_path, const Molecule& molecule);

int basis_function_count(const std::vector<BasisShell>& shells);

/// Offsets of each shell's first function in the full basis.
std::vector<int> shell_offsets(const std::vector<BasisShell>& shells);

namespace detail {
extern const char* const kSto3g;
extern const char* const k631g;
}  // namespace detail

}  // namespace cbohf
