#include "cmlhdc/render.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace cmlhdc {

using nlohmann::json;

Trace trace_from_json(const json& record) {
  try {
    Trace t;
    t.maze = Maze::from_text(record.at("maze").get<std::string>());
    t.success = record.at("success").get<bool>();
    t.failure_reason = record.value("failure_reason", std::string("none"));
    for (const auto& g : record.at("goals")) {
      TraceLeg leg;
      leg.goal = g.at("goal").get<std::string>();
      leg.reached = g.at("reached").get<bool>();
      for (const auto& c : g.at("grid_path")) {
        if (!c.is_array() || c.size() != 2) throw Error(ErrorKind::parse_error, "grid_path entries are [row, col]");
        const Cell cell{c[0].get<int>(), c[1].get<int>()};
        if (!t.maze.in_bounds(cell)) throw Error(ErrorKind::parse_error, "grid_path leaves the maze");
        leg.path.push_back(cell);
      }
      t.legs.push_back(std::move(leg));
    }
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("malformed trace: ") + e.what());
  }
}

Trace load_trace(const std::filesystem::path& path, int index) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot read " + path.string());
  std::string line;
  int line_no = 0;
  int seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    try {
      const json rec = json::parse(line);
      if (!rec.is_object()) throw Error(ErrorKind::parse_error, "expected a JSON object");
      const std::string kind = rec.value("record", std::string("trial"));
      if (kind != "trial") continue;
      const int rec_index = rec.value("index", seen++);
      if (index >= 0 && rec_index != index) continue;
      return trace_from_json(rec);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::parse_error, where + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::parse_error, where + e.what());
    }
  }
  throw Error(ErrorKind::parse_error, path.string() + ": no trial record" +
                                          (index >= 0 ? " with index " + std::to_string(index) : std::string()));
}

std::vector<Cell> dither_cells(const Trace& trace) {
  if (trace.failure_reason != "dither_abort" || trace.legs.empty()) return {};
  const auto& path = trace.legs.back().path;
  if (path.size() < 2) return {};
  std::vector<Cell> cells{path[path.size() - 2], path.back()};
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::string render_text(const Trace& trace) {
  const Maze& maze = trace.maze;
  std::istringstream in(maze.to_text());
  std::string header;
  std::getline(in, header);
  std::vector<std::string> rows;
  for (std::string row; std::getline(in, row);) rows.push_back(row);

  for (std::size_t k = 0; k < trace.legs.size(); ++k) {
    const char mark = k < 9 ? static_cast<char>('1' + k) : '+';
    for (const Cell& c : trace.legs[k].path) {
      char& ch = rows[std::size_t(c.row)][std::size_t(c.col)];
      if (ch == '.' || std::isdigit(static_cast<unsigned char>(ch)) || ch == '+') ch = mark;
    }
  }
  for (const Cell& c : dither_cells(trace)) {
    char& ch = rows[std::size_t(c.row)][std::size_t(c.col)];
    if (!std::isalpha(static_cast<unsigned char>(ch))) ch = '*';
  }

  std::ostringstream out;
  out << header << "\n";
  for (const auto& row : rows) out << row << "\n";
  for (std::size_t k = 0; k < trace.legs.size(); ++k) {
    const auto& leg = trace.legs[k];
    out << "leg " << k + 1 << ": goal " << leg.goal << ", " << leg.path.size() - (leg.path.empty() ? 0 : 1)
        << " steps, " << (leg.reached ? "reached" : "not reached") << "\n";
  }
  out << "result: " << (trace.success ? "success" : "failure (" + trace.failure_reason + ")") << "\n";
  return out.str();
}

std::string render_svg(const Trace& trace) {
  constexpr int kCell = 24;
  static constexpr std::array<const char*, 6> kColors{"#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#ff7f0e", "#17becf"};
  const Maze& maze = trace.maze;
  const int w = maze.width() * kCell;
  const int h = maze.height() * kCell;
  auto centre = [](int v) { return v * kCell + kCell / 2; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h + 20 * int(trace.legs.size()) + 8
      << "\" viewBox=\"0 0 " << w << " " << h + 20 * int(trace.legs.size()) + 8 << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"white\" stroke=\"black\"/>\n";
  for (int r = 0; r < maze.height(); ++r)
    for (int c = 0; c < maze.width(); ++c)
      if (maze.blocked({r, c}))
        out << "<rect x=\"" << c * kCell << "\" y=\"" << r * kCell << "\" width=\"" << kCell << "\" height=\"" << kCell
            << "\" fill=\"#2e7d32\"/>\n";

  for (std::size_t k = 0; k < trace.legs.size(); ++k) {
    const auto& path = trace.legs[k].path;
    if (path.empty()) continue;
    const char* color = kColors[k % kColors.size()];
    const int offset = static_cast<int>(k % 3) * 3 - 3;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"3\" stroke-opacity=\"0.8\" points=\"";
    for (std::size_t i = 0; i < path.size(); ++i) {
      out << (i ? " " : "") << centre(path[i].col) + offset << "," << centre(path[i].row) + offset;
    }
    out << "\"/>\n";
  }
  for (const Cell& c : dither_cells(trace)) {
    out << "<rect x=\"" << c.col * kCell + 2 << "\" y=\"" << c.row * kCell + 2 << "\" width=\"" << kCell - 4
        << "\" height=\"" << kCell - 4 << "\" fill=\"none\" stroke=\"red\" stroke-width=\"2\" stroke-dasharray=\"3,2\"/>\n";
  }
  for (const auto& [label, cell] : maze.placements()) {
    out << "<circle cx=\"" << centre(cell.col) << "\" cy=\"" << centre(cell.row) << "\" r=\"9\" fill=\""
        << (is_door(label) ? "#fff59d" : "#90caf9") << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << centre(cell.col) << "\" y=\"" << centre(cell.row) + 4
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">" << label << "</text>\n";
  }
  for (std::size_t k = 0; k < trace.legs.size(); ++k) {
    const auto& leg = trace.legs[k];
    const int y = h + 20 * static_cast<int>(k) + 16;
    out << "<line x1=\"4\" y1=\"" << y - 4 << "\" x2=\"28\" y2=\"" << y - 4 << "\" stroke=\""
        << kColors[k % kColors.size()] << "\" stroke-width=\"3\"/>\n";
    out << "<text x=\"34\" y=\"" << y << "\" font-family=\"monospace\" font-size=\"12\">leg " << k + 1 << ": "
        << leg.goal << (leg.reached ? " reached" : " not reached") << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace cmlhdc
