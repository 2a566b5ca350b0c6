#include "tempsweep/gridspec.hpp"

#include <cmath>
#include <string>

#include "tempsweep/errors.hpp"
#include "tempsweep/util.hpp"

namespace tempsweep {

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const auto pos = spec.find(':', begin);
    if (pos == std::string_view::npos) {
      parts.push_back(spec.substr(begin));
      break;
    }
    parts.push_back(spec.substr(begin, pos - begin));
    begin = pos + 1;
  }
  if (parts.size() != 3)
    throw InvalidInputError("grid expression must be start:stop:step, got '" + std::string(spec) +
                            "'");

  double values[3];
  for (int i = 0; i < 3; ++i) {
    try {
      values[i] = parse_strict_double(parts[i]);
    } catch (const Error&) {
      throw InvalidInputError("grid expression field '" + std::string(parts[i]) +
                              "' is not a number");
    }
  }
  const double start = values[0], stop = values[1], step = values[2];
  if (!(step > 0.0)) throw InvalidInputError("grid step must be positive");
  if (stop < start - 1e-9)
    throw InvalidInputError("grid stop " + format_double(stop) + " is below start " +
                            format_double(start));

  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double t = start + step * static_cast<double>(k);
    if (t > stop + 1e-9) break;
    grid.push_back(std::round(t * 1e9) / 1e9);
    if (grid.size() > 10000) throw InvalidInputError("grid expands to more than 10000 points");
  }
  return grid;
}

}  // namespace tempsweep
