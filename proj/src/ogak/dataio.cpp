// Copyright 2026 The ogak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ogak/dataio.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ogak/error.hpp"

namespace ogak {

namespace {

static_assert(std::endian::native == std::endian::little, "model files assume little-endian hosts");

constexpr char kMagic[8] = {'O', 'G', 'A', 'K', 'M', 'D', 'L', '\0'};

enum Tag : std::uint32_t {
  kTagInputMesh = 1,
  kTagOutputMesh = 2,
  kTagModel = 3,
  kTagSensor = 4,
  kTagAggregate = 5,
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, fmt::format("cannot write {}", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, fmt::format("write to {} failed", path.string()));
}

std::string format_real(double v) {
  if (std::isnan(v)) return {};
  return fmt::format("{:.17g}", v);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

bool parse_real(std::string_view s, double& v) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

double parse_cell(std::string_view s, const fs::path& path, std::size_t row, std::size_t col) {
  double v = 0.0;
  if (!parse_real(s, v)) {
    fail(ErrorKind::Format, fmt::format("{} row {} column {}: '{}' is not a number",
                                        path.filename().string(), row, col, s));
  }
  return v;
}

std::size_t parse_count(const std::string& s, const std::string& key) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(ErrorKind::Format, fmt::format("manifest key '{}' = '{}' is not a count", key, s));
  }
  return v;
}

double parse_manifest_real(const std::string& s, const std::string& key) {
  double v = 0.0;
  if (!parse_real(s, v)) {
    fail(ErrorKind::Format, fmt::format("manifest key '{}' = '{}' is not a number", key, s));
  }
  return v;
}

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    buf_.append(raw, sizeof(T));
  }
  void put_doubles(const double* p, std::size_t n) {
    buf_.append(reinterpret_cast<const char*>(p), n * sizeof(double));
  }
  void block(std::uint32_t tag, const Writer& body) {
    put(tag);
    put(static_cast<std::uint64_t>(body.buf_.size()));
    buf_ += body.buf_;
  }
  const std::string& bytes() const { return buf_; }
  void raw(const char* p, std::size_t n) { buf_.append(p, n); }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string_view bytes, std::string what) : bytes_(bytes), what_(std::move(what)) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  void get_doubles(double* p, std::size_t n) {
    need(n * sizeof(double));
    std::memcpy(p, bytes_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
  }
  std::string_view take(std::size_t n) {
    need(n);
    const auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      fail(ErrorKind::Format, fmt::format("{} is truncated at byte {}", what_, pos_));
    }
  }
  std::string_view bytes_;
  std::string what_;
  std::size_t pos_ = 0;
};

Writer mesh_block(const Mesh& mesh) {
  Writer w;
  w.put<std::uint64_t>(mesh.dim);
  w.put<std::uint64_t>(mesh.size());
  w.put_doubles(mesh.nodes.data(), static_cast<std::size_t>(mesh.nodes.size()));
  w.put_doubles(mesh.weights.data(), mesh.size());
  return w;
}

Mesh read_mesh_block(Reader& r) {
  const auto dim = r.get<std::uint64_t>();
  const auto m = r.get<std::uint64_t>();
  if (dim == 0 || dim > 64 || m == 0 || m > (std::uint64_t{1} << 32)) {
    fail(ErrorKind::Format, "model mesh block has an invalid shape");
  }
  RowMatrix nodes(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(dim));
  Vector weights(static_cast<Eigen::Index>(m));
  r.get_doubles(nodes.data(), static_cast<std::size_t>(nodes.size()));
  r.get_doubles(weights.data(), static_cast<std::size_t>(m));
  return make_mesh(std::move(nodes), std::move(weights));
}

void put_trace(Writer& w, const FitTrace& trace) {
  w.put(trace.initial_residual);
  w.put<std::uint64_t>(trace.records.size());
  for (const auto& r : trace.records) {
    w.put<std::uint64_t>(r.n);
    w.put(r.residual_H);
    w.put(r.eps_u);
    w.put(r.eps_G);
    w.put(r.score);
    w.put(r.gram_cond);
    w.put(r.orthogonality);
    w.put(r.coef_l1);
    w.put<std::uint64_t>(r.atom_index);
  }
}

FitTrace get_trace(Reader& r) {
  FitTrace trace;
  trace.initial_residual = r.get<double>();
  const auto count = r.get<std::uint64_t>();
  for (std::uint64_t i = 0; i < count; ++i) {
    IterationRecord rec;
    rec.n = r.get<std::uint64_t>();
    rec.residual_H = r.get<double>();
    rec.eps_u = r.get<double>();
    rec.eps_G = r.get<double>();
    rec.score = r.get<double>();
    rec.gram_cond = r.get<double>();
    rec.orthogonality = r.get<double>();
    rec.coef_l1 = r.get<double>();
    rec.atom_index = r.get<std::uint64_t>();
    trace.records.push_back(rec);
  }
  return trace;
}

Writer model_block(const GreedyModel& model) {
  Writer w;
  w.put<std::uint64_t>(model.dim);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.status));
  w.put<std::uint64_t>(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Atom& a = model.atoms[i];
    // Row layout: sign, k, beta, w_1..w_d.
    w.put(static_cast<double>(a.sign));
    w.put(static_cast<double>(a.power));
    w.put(a.bias);
    w.put_doubles(a.direction.data(), a.dim());
  }
  w.put_doubles(model.coefficients.data(), model.size());
  put_trace(w, model.trace);
  return w;
}

GreedyModel read_model_block(Reader& r) {
  GreedyModel model;
  model.dim = r.get<std::uint64_t>();
  const auto status = r.get<std::uint32_t>();
  if (status > static_cast<std::uint32_t>(FitStatus::Converged)) {
    fail(ErrorKind::Format, fmt::format("unknown fit status {}", status));
  }
  model.status = static_cast<FitStatus>(status);
  const auto n = r.get<std::uint64_t>();
  if (model.dim == 0 || model.dim > 64 || n > (std::uint64_t{1} << 24)) {
    fail(ErrorKind::Format, "model block has an invalid shape");
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    Atom a;
    const double sign = r.get<double>();
    const double power = r.get<double>();
    if ((sign != 1.0 && sign != -1.0) || power < 0.0 || power != std::floor(power)) {
      fail(ErrorKind::Format, fmt::format("atom {} has an invalid sign or power", i));
    }
    a.sign = static_cast<int>(sign);
    a.power = static_cast<unsigned>(power);
    a.bias = r.get<double>();
    a.direction.resize(model.dim);
    r.get_doubles(a.direction.data(), model.dim);
    model.atoms.push_back(std::move(a));
  }
  model.coefficients.resize(n);
  r.get_doubles(model.coefficients.data(), n);
  model.trace = get_trace(r);
  return model;
}

std::string header_bytes(ModelKind kind) {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.put(kModelVersion);
  w.put(static_cast<std::uint32_t>(kind));
  return w.bytes();
}

std::string trace_row(const IterationRecord& r) {
  return fmt::format("{},{},{},{},{},{}", r.n, format_real(r.residual_H), format_real(r.eps_u),
                     format_real(r.eps_G), format_real(r.score), format_real(r.gram_cond));
}

}  // namespace

std::string hash_file(const fs::path& path) {
  const std::string bytes = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

void write_manifest(const fs::path& path, const Manifest& manifest) {
  std::string out;
  for (const auto& [k, v] : manifest) {
    require(k.find('=') == std::string::npos && k.find('\n') == std::string::npos &&
                v.find('\n') == std::string::npos,
            fmt::format("manifest entry '{}' cannot be written", k));
    out += k + "=" + v + "\n";
  }
  write_file(path, out);
}

Manifest read_manifest(const fs::path& path) {
  const std::string text = read_file(path);
  Manifest m;
  std::size_t row = 0;
  for (auto line : split(text, '\n')) {
    ++row;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::Format, fmt::format("{} line {}: expected key=value", path.string(), row));
    }
    m[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
  }
  return m;
}

void write_matrix_csv(const fs::path& path, const RowMatrix& values) {
  std::string out;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j > 0) out += ',';
      fmt::format_to(std::back_inserter(out), "{:.17g}", values(i, j));
    }
    out += '\n';
  }
  write_file(path, out);
}

RowMatrix read_matrix_csv(const fs::path& path, std::optional<std::size_t> cols) {
  const std::string text = read_file(path);
  const auto lines = lines_of(text);
  if (lines.empty()) fail(ErrorKind::Format, fmt::format("{} is empty", path.filename().string()));
  const std::size_t width = cols.value_or(split(lines.front(), ',').size());
  RowMatrix m(static_cast<Eigen::Index>(lines.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != width) {
      fail(ErrorKind::Format, fmt::format("{} row {}: expected {} values, got {}",
                                          path.filename().string(), i + 1, width, cells.size()));
    }
    for (std::size_t j = 0; j < width; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_cell(cells[j], path, i + 1, j + 1);
    }
  }
  return m;
}

void write_mesh_csv(const fs::path& path, const Mesh& mesh) {
  std::string out;
  for (std::size_t k = 0; k < mesh.dim; ++k) out += fmt::format("x{},", k + 1);
  out += "weight\n";
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    for (std::size_t k = 0; k < mesh.dim; ++k) {
      fmt::format_to(std::back_inserter(out), "{:.17g},", mesh.nodes(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    }
    fmt::format_to(std::back_inserter(out), "{:.17g}\n", mesh.weights[static_cast<Eigen::Index>(i)]);
  }
  write_file(path, out);
}

Mesh read_mesh_csv(const fs::path& path, std::optional<std::size_t> dim, std::optional<double> volume) {
  const std::string text = read_file(path);
  auto lines = lines_of(text);
  const std::string name = path.filename().string();
  if (lines.empty()) fail(ErrorKind::Format, fmt::format("{} is empty", name));
  const auto head = split(lines.front(), ',');
  const std::size_t width = head.size();
  double probe = 0.0;
  const bool has_header = !parse_real(head.front(), probe);
  const std::size_t first = has_header ? 1 : 0;
  bool weighted = false;
  if (has_header) {
    weighted = trim(head.back()) == "weight";
  } else if (dim) {
    weighted = width == *dim + 1;
  }
  const std::size_t d = width - (weighted ? 1 : 0);
  if (d == 0 || (dim && d != *dim)) {
    fail(ErrorKind::Format, fmt::format("{}: {} columns do not fit dimension {}", name, width,
                                        dim.value_or(d)));
  }
  if (lines.size() <= first) fail(ErrorKind::Format, fmt::format("{} has no nodes", name));
  const std::size_t m = lines.size() - first;
  RowMatrix nodes(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  Vector weights(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto cells = split(lines[first + i], ',');
    const std::size_t row = first + i + 1;
    if (cells.size() != width) {
      fail(ErrorKind::Format, fmt::format("{} row {}: expected {} values, got {}", name, row, width,
                                          cells.size()));
    }
    for (std::size_t k = 0; k < d; ++k) nodes(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = parse_cell(cells[k], path, row, k + 1);
    if (weighted) weights[static_cast<Eigen::Index>(i)] = parse_cell(cells[d], path, row, d + 1);
  }
  if (!weighted) {
    if (!volume) {
      fail(ErrorKind::Format, fmt::format("{} has no weight column and no volume was supplied", name));
    }
    return make_uniform_mesh(std::move(nodes), *volume);
  }
  Mesh mesh = make_mesh(std::move(nodes), std::move(weights));
  if (volume && std::abs(mesh.volume - *volume) > 1e-12 * *volume) {
    fail(ErrorKind::Format, fmt::format("{}: weights sum to {} but the volume is {}", name,
                                        mesh.volume, *volume));
  }
  return mesh;
}

void save_dataset(const fs::path& dir, const DataSet& data) {
  validate(data);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  write_mesh_csv(dir / "mesh_in.csv", data.input);
  write_mesh_csv(dir / "mesh_out.csv", data.output);
  write_matrix_csv(dir / "F.csv", data.forcings);
  write_matrix_csv(dir / "U.csv", data.responses);
  Manifest m;
  m["format"] = "ogak-dataset";
  m["version"] = "1";
  m["samples"] = fmt::format("{}", data.samples());
  m["input_dim"] = fmt::format("{}", data.input.dim);
  m["input_nodes"] = fmt::format("{}", data.input.size());
  m["input_volume"] = format_real(data.input.volume);
  m["output_dim"] = fmt::format("{}", data.output.dim);
  m["output_nodes"] = fmt::format("{}", data.output.size());
  m["output_volume"] = format_real(data.output.volume);
  m["normalized"] = data.normalized ? "true" : "false";
  for (const auto& [k, v] : data.provenance) m["provenance." + k] = v;
  for (const char* f : {"mesh_in.csv", "mesh_out.csv", "F.csv", "U.csv"}) {
    m[std::string("hash.") + f] = hash_file(dir / f);
  }
  write_manifest(dir / "manifest.txt", m);
}

DataSet load_dataset(const fs::path& dir) {
  const fs::path mpath = dir / "manifest.txt";
  const Manifest m = read_manifest(mpath);
  if (const auto it = m.find("format"); it != m.end() && it->second != "ogak-dataset") {
    fail(ErrorKind::Format, fmt::format("{} is not a dataset manifest", mpath.string()));
  }
  for (const char* f : {"mesh_in.csv", "mesh_out.csv", "F.csv", "U.csv"}) {
    const auto it = m.find(std::string("hash.") + f);
    if (it == m.end()) continue;
    const std::string got = hash_file(dir / f);
    if (got != it->second) {
      fail(ErrorKind::Format, fmt::format("{}: hash {} does not match manifest {}", f, got, it->second));
    }
  }
  auto opt_real = [&](const char* key) -> std::optional<double> {
    const auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    return parse_manifest_real(it->second, key);
  };
  auto opt_count = [&](const char* key) -> std::optional<std::size_t> {
    const auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    return parse_count(it->second, key);
  };
  DataSet data;
  data.input = read_mesh_csv(dir / "mesh_in.csv", opt_count("input_dim"), opt_real("input_volume"));
  data.output = read_mesh_csv(dir / "mesh_out.csv", opt_count("output_dim"), opt_real("output_volume"));
  data.forcings = read_matrix_csv(dir / "F.csv", data.input.size());
  data.responses = read_matrix_csv(dir / "U.csv", data.output.size());
  if (const auto n = opt_count("samples"); n && *n != data.samples()) {
    fail(ErrorKind::Format, fmt::format("F.csv has {} rows but the manifest lists {} samples",
                                        data.samples(), *n));
  }
  if (data.responses.rows() != data.forcings.rows()) {
    fail(ErrorKind::Format, fmt::format("F.csv has {} rows but U.csv has {}", data.forcings.rows(),
                                        data.responses.rows()));
  }
  const auto it = m.find("normalized");
  data.normalized = it != m.end() && it->second == "true";
  for (const auto& [k, v] : m) {
    if (k.rfind("provenance.", 0) == 0) data.provenance[k.substr(11)] = v;
  }
  validate(data);
  return data;
}

void save_model(const fs::path& path, const KernelModel& model) {
  Writer w;
  w.raw(header_bytes(ModelKind::Kernel).data(), 16);
  w.block(kTagInputMesh, mesh_block(model.input));
  w.block(kTagOutputMesh, mesh_block(model.output));
  w.block(kTagModel, model_block(model.model));
  write_file(path, w.bytes());
}

void save_model(const fs::path& path, const PointwiseModel& model) {
  require(model.sensors.size() == model.models.size(), "sensor list and models differ in length");
  Writer w;
  w.raw(header_bytes(ModelKind::Pointwise).data(), 16);
  w.block(kTagInputMesh, mesh_block(model.input));
  w.block(kTagOutputMesh, mesh_block(model.output));
  for (std::size_t k = 0; k < model.models.size(); ++k) {
    Writer b;
    b.put<std::uint64_t>(model.sensors[k]);
    const Writer body = model_block(model.models[k]);
    b.raw(body.bytes().data(), body.bytes().size());
    w.block(kTagSensor, b);
  }
  Writer agg;
  put_trace(agg, model.aggregate);
  w.block(kTagAggregate, agg);
  write_file(path, w.bytes());
}

AnyModel load_model(const fs::path& path) {
  const std::string bytes = read_file(path);
  Reader r(bytes, path.filename().string());
  const auto magic = r.take(sizeof(kMagic));
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) {
    fail(ErrorKind::Format, fmt::format("{} is not a model file", path.string()));
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kModelVersion) {
    fail(ErrorKind::Format, fmt::format("{}: model version {} is not supported (expected {})",
                                        path.string(), version, kModelVersion));
  }
  const auto kind = r.get<std::uint32_t>();
  if (kind != 1 && kind != 2) fail(ErrorKind::Format, fmt::format("unknown model kind {}", kind));
  std::optional<Mesh> input;
  std::optional<Mesh> output;
  std::optional<GreedyModel> single;
  PointwiseModel pw;
  while (!r.done()) {
    const auto tag = r.get<std::uint32_t>();
    const auto len = r.get<std::uint64_t>();
    Reader b(r.take(static_cast<std::size_t>(len)), path.filename().string());
    switch (tag) {
      case kTagInputMesh: input = read_mesh_block(b); break;
      case kTagOutputMesh: output = read_mesh_block(b); break;
      case kTagModel: single = read_model_block(b); break;
      case kTagSensor:
        pw.sensors.push_back(static_cast<std::size_t>(b.get<std::uint64_t>()));
        pw.models.push_back(read_model_block(b));
        break;
      case kTagAggregate: pw.aggregate = get_trace(b); break;
      default: break;  // unknown blocks are skipped
    }
  }
  if (!input || !output) fail(ErrorKind::Format, fmt::format("{} lacks mesh blocks", path.string()));
  if (kind == 1) {
    if (!single) fail(ErrorKind::Format, fmt::format("{} lacks a model block", path.string()));
    return KernelModel{std::move(*single), std::move(*input), std::move(*output)};
  }
  for (const std::size_t s : pw.sensors) {
    if (s >= output->size()) fail(ErrorKind::Format, fmt::format("sensor {} out of range", s));
  }
  pw.input = std::move(*input);
  pw.output = std::move(*output);
  return pw;
}

FitTrace TraceTable::select(const std::string& sensor) const {
  FitTrace t;
  for (const auto& row : rows) {
    if (!has_sensor || row.sensor == sensor) t.records.push_back(row.record);
  }
  return t;
}

void write_trace(const fs::path& path, const FitTrace& trace) {
  std::string out = std::string(kTraceHeader) + "\n";
  for (const auto& r : trace.records) out += trace_row(r) + "\n";
  write_file(path, out);
}

void write_trace(const fs::path& path, const PointwiseModel& model) {
  std::string out = std::string(kTraceHeader) + ",sensor\n";
  for (std::size_t k = 0; k < model.models.size(); ++k) {
    for (const auto& r : model.models[k].trace.records) {
      out += trace_row(r) + fmt::format(",{}\n", model.sensors[k]);
    }
  }
  for (const auto& r : model.aggregate.records) out += trace_row(r) + ",all\n";
  write_file(path, out);
}

TraceTable read_trace(const fs::path& path) {
  const std::string text = read_file(path);
  const auto lines = lines_of(text);
  const std::string name = path.filename().string();
  if (lines.empty()) fail(ErrorKind::Format, fmt::format("{} is empty", name));
  TraceTable table;
  if (lines.front() == std::string(kTraceHeader) + ",sensor") {
    table.has_sensor = true;
  } else if (lines.front() != kTraceHeader) {
    fail(ErrorKind::Format, fmt::format("{}: unexpected header '{}'", name, lines.front()));
  }
  const std::size_t width = table.has_sensor ? 7 : 6;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != width) {
      fail(ErrorKind::Format, fmt::format("{} row {}: expected {} fields, got {}", name, i + 1,
                                          width, cells.size()));
    }
    TraceRow row;
    auto cell = [&](std::size_t k) {
      if (trim(cells[k]).empty()) return kMissing;
      return parse_cell(cells[k], path, i + 1, k + 1);
    };
    const double n = cell(0);
    if (!(n >= 1.0) || n != std::floor(n)) {
      fail(ErrorKind::Format, fmt::format("{} row {}: invalid n", name, i + 1));
    }
    row.record.n = static_cast<std::size_t>(n);
    row.record.residual_H = cell(1);
    row.record.eps_u = cell(2);
    row.record.eps_G = cell(3);
    row.record.score = cell(4);
    row.record.gram_cond = cell(5);
    if (table.has_sensor) row.sensor = std::string(trim(cells[6]));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace ogak
