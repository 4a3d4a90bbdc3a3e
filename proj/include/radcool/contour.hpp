#pragma once

// Marching squares over a rectilinear grid. Saddle cells are split by the
// cell-centre average. Crossings are linear along cell edges and shared
// between neighbouring cells, so chained polylines join exactly.

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "radcool/format.hpp"
#include "radcool/units.hpp"

namespace radcool {

struct Polyline {
  double level = 0.0;
  bool closed = false;
  std::vector<std::array<double, 2>> points;  // (x, y)
};

/// `z` is row-major with x slowest: z[i * y.size() + j] sits at (x[i], y[j]).
std::vector<Polyline> marching_squares(std::span<const double> x, std::span<const double> y,
                                       std::span<const double> z, std::span<const double> levels);

/// CSV with columns level, line, vertex, closed, <x_name>, <y_name>.
std::string contours_to_csv(const std::vector<Polyline>& lines, const std::string& x_name,
                            const std::string& y_name);

// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Polyline> contour_level(std::span<const double> x, std::span<const double> y,
                                           std::span<const double> z, double level) {
  const std::size_t nx = x.size(), ny = y.size();
  auto at = [&](std::size_t i, std::size_t j) { return z[i * ny + j]; };
  auto above = [&](double v) { return v >= level; };

  // Edge keys: 2*(i*ny+j) for the x-directed edge from (i,j), +1 for the y-directed one.
  std::map<std::size_t, std::array<double, 2>> crossings;
  auto crossing = [&](std::size_t key) {
    if (auto it = crossings.find(key); it != crossings.end()) return key;
    const std::size_t node = key / 2;
    const std::size_t i = node / ny, j = node % ny;
    const bool along_x = key % 2 == 0;
    const std::size_t i1 = along_x ? i + 1 : i, j1 = along_x ? j : j + 1;
    const double za = at(i, j), zb = at(i1, j1);
    const double t = (level - za) / (zb - za);
    crossings[key] = {x[i] + t * (x[i1] - x[i]), y[j] + t * (y[j1] - y[j])};
    return key;
  };

  std::vector<std::array<std::size_t, 2>> segments;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      // Corners b0..b3 counter-clockwise from (i,j); edge e_k joins b_k and b_(k+1).
      const std::array<double, 4> v{at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      const std::array<std::size_t, 4> edge{2 * (i * ny + j), 2 * ((i + 1) * ny + j) + 1,
                                            2 * (i * ny + j + 1), 2 * (i * ny + j) + 1};
      std::array<bool, 4> b{};
      for (int k = 0; k < 4; ++k) b[k] = above(v[k]);
      std::vector<int> cut;
      for (int k = 0; k < 4; ++k)
        if (b[k] != b[(k + 1) % 4]) cut.push_back(k);
      if (cut.size() == 2) {
        segments.push_back({crossing(edge[cut[0]]), crossing(edge[cut[1]])});
      } else if (cut.size() == 4) {
        const bool centre = above(0.25 * (v[0] + v[1] + v[2] + v[3]));
        // Cut off each corner whose side differs from the centre.
        for (int k = 0; k < 4; ++k)
          if (b[k] != centre) segments.push_back({crossing(edge[(k + 3) % 4]), crossing(edge[k])});
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s)
    for (auto e : segments[s]) incident[e].push_back(s);

  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> out;
  auto trace = [&](std::size_t start_seg, std::size_t start_edge) {
    Polyline line;
    line.level = level;
    std::size_t seg = start_seg, edge = start_edge;
    line.points.push_back(crossings[edge]);
    for (;;) {
      used[seg] = true;
      edge = segments[seg][0] == edge ? segments[seg][1] : segments[seg][0];
      line.points.push_back(crossings[edge]);
      std::size_t next = segments.size();
      for (auto s : incident[edge])
        if (!used[s]) next = s;
      if (next == segments.size()) break;
      seg = next;
    }
    line.closed = line.points.size() > 2 && edge == start_edge;
    out.push_back(std::move(line));
  };
  // Open lines start at boundary crossings (one incident segment).
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (auto e : segments[s]) {
      if (incident[e].size() == 1) {
        trace(s, e);
        break;
      }
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) trace(s, segments[s][0]);
  return out;
}

}  // namespace detail

inline std::vector<Polyline> marching_squares(std::span<const double> x, std::span<const double> y,
                                              std::span<const double> z, std::span<const double> levels) {
  if (x.size() < 2 || y.size() < 2) throw DomainError("contouring needs at least a 2x2 grid");
  if (z.size() != x.size() * y.size()) throw DomainError("grid size does not match the axes");
  for (double v : z)
    if (!std::isfinite(v)) throw DomainError("grid contains non-finite values");
  std::vector<Polyline> out;
  for (double level : levels) {
    detail::require_finite(level, "contour level");
    auto lines = detail::contour_level(x, y, z, level);
    out.insert(out.end(), std::make_move_iterator(lines.begin()), std::make_move_iterator(lines.end()));
  }
  return out;
}

inline std::string contours_to_csv(const std::vector<Polyline>& lines, const std::string& x_name,
                                   const std::string& y_name) {
  std::string s = "level,line,vertex,closed," + x_name + "," + y_name + "\n";
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto& line = lines[l];
    for (std::size_t k = 0; k < line.points.size(); ++k)
      s += format_number(line.level) + "," + std::to_string(l) + "," + std::to_string(k) + "," +
           (line.closed ? "1" : "0") + "," + format_number(line.points[k][0]) + "," +
           format_number(line.points[k][1]) + "\n";
  }
  return s;
}

}  // namespace radcool
