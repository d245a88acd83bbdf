#include "cmlhdc/model_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace cmlhdc {

std::string_view to_string(ModelKind kind) noexcept { return kind == ModelKind::object ? "object" : "grid"; }

namespace {

constexpr std::string_view kMagic = "cmlhdc-model";

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void put_f64(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.write(buf, 8);
}

double get_f64(std::istream& in) {
  char buf[8];
  if (!in.read(buf, 8)) throw Error(ErrorKind::io_error, "model file truncated");
  std::uint64_t bits;
  std::memcpy(&bits, buf, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  return std::bit_cast<double>(bits);
}

void write_block(std::ostream& out, const Matrix& m) {
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) put_f64(out, m(r, c));
}

Matrix read_block(std::istream& in, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = get_f64(in);
  return m;
}

std::string format_real(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io_error, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::io_error, "write failed for " + path.string());
}

struct Header {
  std::map<std::string, std::string> fields;

  const std::string& get(const std::string& key) const {
    auto it = fields.find(key);
    if (it == fields.end()) throw Error(ErrorKind::parse_error, "model header lacks '" + key + "'");
    return it->second;
  }

  long long integer(const std::string& key) const {
    const auto& text = get(key);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || v < 0) {
      throw Error(ErrorKind::parse_error, "model header field '" + key + "' is not a count: " + text);
    }
    return v;
  }
};

std::ifstream open_in(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::missing_model, "no model at " + path.string() + "; run `cmlhdc train` first");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot read " + path.string());
  return in;
}

Header read_header(std::istream& in, const std::filesystem::path& path) {
  Header h;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (line == "data") {
      if (!h.fields.count(std::string(kMagic))) throw Error(ErrorKind::parse_error, where + "missing format line");
      return h;
    }
    const auto space = line.find(' ');
    if (space == std::string::npos) throw Error(ErrorKind::parse_error, where + "expected 'key value'");
    std::string key = line.substr(0, space);
    if (line_no == 1 && key != kMagic) throw Error(ErrorKind::parse_error, where + "not a cmlhdc model file");
    if (!h.fields.emplace(key, line.substr(space + 1)).second) {
      throw Error(ErrorKind::parse_error, where + "duplicate key '" + key + "'");
    }
  }
  throw Error(ErrorKind::parse_error, path.string() + ": header not terminated by 'data'");
}

void check_version_and_kind(const Header& h, ModelKind want) {
  if (h.integer(std::string(kMagic)) != kModelFormatVersion) {
    throw Error(ErrorKind::parse_error, "unsupported model format version " + h.get(std::string(kMagic)));
  }
  if (h.get("kind") != to_string(want)) {
    throw Error(ErrorKind::parse_error,
                "expected a " + std::string(to_string(want)) + " model, found " + h.get("kind"));
  }
}

void expect_end(std::istream& in, const std::filesystem::path& path) {
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::parse_error, path.string() + ": trailing bytes after model data");
  }
}

std::vector<std::string> split(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

void save_cml(const std::filesystem::path& path, const Cml& cml) {
  const CmlGraph& g = cml.graph();
  auto out = open_out(path);
  out << kMagic << ' ' << kModelFormatVersion << '\n' << "kind object\n";
  out << "d " << cml.dim() << "\nn " << g.n() << "\ne " << g.e() << '\n';
  out << "labels";
  for (const auto& l : g.labels()) out << ' ' << l;
  out << "\nedges";
  for (const auto& edge : g.edges()) out << ' ' << edge.from << '>' << edge.to;
  out << "\nweights";
  for (Real w : g.weights()) out << ' ' << format_real(w);
  out << "\ndata\n";
  write_block(out, cml.states());
  write_block(out, cml.actions());
  write_block(out, cml.gating());
  finish(out, path);
}

void save_grid(const std::filesystem::path& path, const GridCml& grid) {
  auto out = open_out(path);
  out << kMagic << ' ' << kModelFormatVersion << '\n' << "kind grid\n";
  out << "d " << grid.dim() << "\nwidth " << grid.width() << "\nheight " << grid.height() << "\ndata\n";
  write_block(out, grid.states());
  write_block(out, grid.actions());
  finish(out, path);
}

Cml load_cml(const std::filesystem::path& path) {
  auto in = open_in(path);
  const Header h = read_header(in, path);
  check_version_and_kind(h, ModelKind::object);
  const Index d = h.integer("d");
  const Index n = h.integer("n");
  const Index e = h.integer("e");

  auto labels = split(h.get("labels"));
  if (static_cast<Index>(labels.size()) != n) throw Error(ErrorKind::parse_error, "label count does not match n");
  std::vector<DirectedEdge> edges;
  for (const auto& tok : split(h.get("edges"))) {
    const auto arrow = tok.find('>');
    DirectedEdge edge;
    const char* b = tok.data();
    const char* end = b + tok.size();
    if (arrow == std::string::npos || std::from_chars(b, b + arrow, edge.from).ptr != b + arrow ||
        std::from_chars(b + arrow + 1, end, edge.to).ptr != end) {
      throw Error(ErrorKind::parse_error, "malformed edge '" + tok + "'");
    }
    edges.push_back(edge);
  }
  if (static_cast<Index>(edges.size()) != e) throw Error(ErrorKind::parse_error, "edge count does not match e");
  std::vector<Real> weights;
  for (const auto& tok : split(h.get("weights"))) {
    Real w = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error(ErrorKind::parse_error, "malformed weight '" + tok + "'");
    }
    weights.push_back(w);
  }

  CmlGraph graph(std::move(labels), std::move(edges), std::move(weights));
  Matrix s = read_block(in, d, n);
  Matrix a = read_block(in, d, e);
  Matrix g = read_block(in, e, n);
  expect_end(in, path);
  return Cml(std::move(graph), std::move(s), std::move(a), std::move(g));
}

GridCml load_grid(const std::filesystem::path& path) {
  auto in = open_in(path);
  const Header h = read_header(in, path);
  check_version_and_kind(h, ModelKind::grid);
  const Index d = h.integer("d");
  const auto width = static_cast<int>(h.integer("width"));
  const auto height = static_cast<int>(h.integer("height"));
  Matrix p = read_block(in, d, Index(width) * height);
  Matrix a = read_block(in, d, 4);
  expect_end(in, path);
  return GridCml(width, height, std::move(p), std::move(a));
}

ModelKind peek_model_kind(const std::filesystem::path& path) {
  auto in = open_in(path);
  const Header h = read_header(in, path);
  const auto& kind = h.get("kind");
  if (kind == "object") return ModelKind::object;
  if (kind == "grid") return ModelKind::grid;
  throw Error(ErrorKind::parse_error, "unknown model kind " + kind);
}

}  // namespace cmlhdc
