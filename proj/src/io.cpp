#include "gsynth/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gsynth::io {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

/// Line on which "key" first appears, or 1.
std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  return pos == std::string_view::npos ? 1 : line_of_offset(text, pos);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_fail(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0),
               std::string("malformed JSON (") + e.what() + ")");
  } catch (const json::exception& e) {
    // Number overflow carries no offset; locate the quoted token instead.
    const std::string what = e.what();
    const auto open = what.find('\'');
    const auto close = what.find('\'', open + 1);
    std::size_t line = 1;
    if (open != std::string::npos && close != std::string::npos) {
      const auto pos = text.find(what.substr(open + 1, close - open - 1));
      if (pos != std::string_view::npos) line = line_of_offset(text, pos);
    }
    parse_fail(line, what);
  }
}

const json& member(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key))
    parse_fail(1, std::string("missing field \"") + key + "\"");
  return obj.at(key);
}

std::size_t read_modes(const json& obj, std::string_view text) {
  const json& m = member(obj, "modes");
  if (!m.is_number_integer() || m.get<long long>() <= 0)
    parse_fail(line_of_key(text, "modes"), "\"modes\" must be a positive integer");
  return m.get<std::size_t>();
}

template <typename Fn>
auto with_line(std::string_view text, const char* key, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (std::string_view(e.what()).rfind("line ", 0) == 0) throw;
    parse_fail(line_of_key(text, key), e.what());
  } catch (const json::exception& e) {
    parse_fail(line_of_key(text, key), e.what());
  }
}

}  // namespace

json real_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json complex_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix real_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw Error(ErrorKind::Parse, std::string(what) + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  RealMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorKind::Parse, std::string(what) + ": ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number())
        throw Error(ErrorKind::Parse, std::string(what) + ": non-numeric entry");
      m(r, c) = v.get<double>();
    }
  }
  require_finite(m, what);
  return m;
}

ComplexMatrix complex_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    throw Error(ErrorKind::Parse, std::string(what) + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorKind::Parse, std::string(what) + ": ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw Error(ErrorKind::Parse,
                    std::string(what) + ": complex entries must be [re, im] pairs");
      m(r, c) = cplx(v[0].get<double>(), v[1].get<double>());
    }
  }
  require_finite(m, what);
  return m;
}

MatrixFile parse_matrix_file(std::string_view text, double tol) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_fail(1, "top level must be an object");
  const json& kind = member(doc, "kind");
  MatrixFile out;
  out.modes = read_modes(doc, text);
  const auto n = static_cast<Eigen::Index>(out.modes);
  const std::size_t data_line = line_of_key(text, "data");

  if (kind == "covariance") {
    out.kind = MatrixKind::Covariance;
    RealMatrix v = with_line(text, "data", [&] {
      return real_from_json(member(doc, "data"), "covariance data");
    });
    if (v.rows() != 2 * n || v.cols() != 2 * n)
      parse_fail(data_line, "covariance data must be " + std::to_string(2 * n) + "x" +
                                std::to_string(2 * n) + " for " + std::to_string(n) +
                                " modes");
    const std::string ordering = doc.value("ordering", std::string("block"));
    if (ordering == "interleaved") {
      v = interleaved_to_block(v);
    } else if (ordering != "block") {
      parse_fail(line_of_key(text, "ordering"),
                 "unknown ordering \"" + ordering + "\" (block|interleaved)");
    }
    const double scale = std::max(1.0, max_norm(v));
    if (max_norm(RealMatrix(v - v.transpose())) > tol * scale)
      parse_fail(data_line, "covariance matrix is not symmetric");
    out.covariance = 0.5 * (v + v.transpose());
  } else if (kind == "graph") {
    out.kind = MatrixKind::Graph;
    ComplexMatrix z = with_line(text, "data", [&] {
      return complex_from_json(member(doc, "data"), "graph data");
    });
    if (z.rows() != n || z.cols() != n)
      parse_fail(data_line, "graph data must be " + std::to_string(n) + "x" +
                                std::to_string(n));
    const double scale = std::max(1.0, max_norm(z));
    if (max_norm(ComplexMatrix(z - z.transpose())) > tol * scale)
      parse_fail(data_line, "graph matrix is not symmetric");
    out.graph = 0.5 * (z + z.transpose());
  } else {
    parse_fail(line_of_key(text, "kind"), "\"kind\" must be \"covariance\" or \"graph\"");
  }
  return out;
}

RealizationFile parse_realization_file(std::string_view text, double tol) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_fail(1, "top level must be an object");
  if (member(doc, "kind") != "realization")
    parse_fail(line_of_key(text, "kind"), "\"kind\" must be \"realization\"");
  const std::size_t modes = read_modes(doc, text);
  const auto n = static_cast<Eigen::Index>(modes);

  auto real_field = [&](const char* key, Eigen::Index rows, Eigen::Index cols) {
    RealMatrix m = with_line(text, key, [&] { return real_from_json(member(doc, key), key); });
    if (m.rows() != rows || m.cols() != cols)
      parse_fail(line_of_key(text, key), std::string(key) + " has the wrong shape");
    return m;
  };
  auto complex_field = [&](const char* key, Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix m =
        with_line(text, key, [&] { return complex_from_json(member(doc, key), key); });
    if (m.rows() != rows || (cols >= 0 && m.cols() != cols))
      parse_fail(line_of_key(text, key), std::string(key) + " has the wrong shape");
    return m;
  };

  const ComplexMatrix z = complex_field("graph", n, n);
  GraphMatrix graph = with_line(text, "graph", [&] { return GraphMatrix(z, tol); });
  RealMatrix r = real_field("R", n, n);
  RealMatrix gamma = real_field("Gamma", n, n);
  ComplexMatrix p = complex_field("P", n, -1);
  const auto k = p.cols();
  RealMatrix g = real_field("G", 2 * n, 2 * n);
  ComplexMatrix c = complex_field("C", k, 2 * n);
  if (doc.contains("channels") && doc["channels"] != k)
    parse_fail(line_of_key(text, "channels"), "\"channels\" disagrees with the shape of P");
  if (max_norm(RealMatrix(g - g.transpose())) > tol * std::max(1.0, max_norm(g)))
    parse_fail(line_of_key(text, "G"), "G is not symmetric");

  RealizationFile out{Realization{std::move(graph), std::move(r), std::move(gamma),
                                  std::move(p), 0.5 * (g + g.transpose()), std::move(c)},
                      {}};
  if (doc.contains("noise")) {
    with_line(text, "noise", [&] {
      for (const json& ch : doc.at("noise")) {
        NoiseChannel nc;
        nc.mode = ch.at("mode").get<std::size_t>();
        nc.gamma = ch.at("gamma").get<double>();
        nc.nbar = ch.at("nbar").get<double>();
        const std::string kind = ch.at("kind").get<std::string>();
        if (kind == "raising") nc.kind = ChannelKind::Raising;
        else if (kind == "lowering") nc.kind = ChannelKind::Lowering;
        else throw Error(ErrorKind::Parse, "noise kind must be raising or lowering");
        if (nc.mode >= modes) throw Error(ErrorKind::Parse, "noise mode out of range");
        (void)nc.amplitude();
        out.noise.push_back(nc);
      }
      return 0;
    });
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json covariance_file(const RealMatrix& v) {
  return json{{"kind", "covariance"},
              {"modes", v.rows() / 2},
              {"ordering", "block"},
              {"data", real_to_json(v)}};
}

json graph_file(const GraphMatrix& z) {
  return json{{"kind", "graph"}, {"modes", z.modes()}, {"data", complex_to_json(z.z())}};
}

json noise_to_json(const std::vector<NoiseChannel>& noise) {
  json arr = json::array();
  for (const auto& ch : noise)
    arr.push_back(json{{"mode", ch.mode},
                       {"gamma", ch.gamma},
                       {"nbar", ch.nbar},
                       {"kind", ch.kind == ChannelKind::Raising ? "raising" : "lowering"}});
  return arr;
}

json realization_file(const Realization& r, const std::vector<NoiseChannel>& noise) {
  json out{{"kind", "realization"},
           {"modes", r.modes()},
           {"channels", r.channels()},
           {"graph", complex_to_json(r.graph.z())},
           {"R", real_to_json(r.R)},
           {"Gamma", real_to_json(r.Gamma)},
           {"P", complex_to_json(r.P)},
           {"G", real_to_json(r.G)},
           {"C", complex_to_json(r.C)}};
  if (!noise.empty()) out["noise"] = noise_to_json(noise);
  return out;
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gsynth::io
