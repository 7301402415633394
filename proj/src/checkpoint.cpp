// SPDX-License-Identifier: Apache-2.0
#include "mhstn/checkpoint.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "mhstn/errors.hpp"

namespace mhstn {

static_assert(std::endian::native == std::endian::little, "checkpoints assume a little-endian host");

namespace {

constexpr char kMagic[8] = {'M', 'H', 'S', 'T', 'N', 'C', 'K', 'P'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename T>
T get(std::istream& in, const std::string& what) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof value)) throw IoError("truncated checkpoint: " + what);
  return value;
}

std::string get_string(std::istream& in) {
  const auto n = get<std::uint32_t>(in, "string length");
  if (n > (1u << 24)) throw IoError("corrupt checkpoint: oversized string");
  std::string s(n, '\0');
  if (!in.read(s.data(), n)) throw IoError("truncated checkpoint: string");
  return s;
}

std::string exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  double x = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) throw IoError("checkpoint: bad number '" + s + "'");
  return x;
}

std::size_t parse_size(const std::string& s) {
  std::size_t x = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size()) throw IoError("checkpoint: bad integer '" + s + "'");
  return x;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    if (comma > start) out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::map<std::string, std::string> shared_metadata(const StationNets& nets) {
  std::map<std::string, std::string> m;
  m["target"] = variable_name(nets.target());
  m["stations"] = join(nets.stations);
  m["history"] = std::to_string(nets.spec.history);
  m["horizon"] = std::to_string(nets.spec.horizon);
  m["fct_hour"] = std::to_string(nets.spec.fct_hour);
  m["history_covariates"] = join_variables(nets.spec.history_covariates);
  m["future_covariates"] = join_variables(nets.spec.future_covariates);
  m["trained_through"] = stage_name(nets.trained_through);
  m["norm.begin"] = std::to_string(nets.norm.fitted_on.begin);
  m["norm.end"] = std::to_string(nets.norm.fitted_on.end);
  for (auto var : kAllVariables) {
    const std::string name(variable_name(var));
    m["norm.nwp." + name + ".mean"] = exact(nets.norm.nwp[index_of(var)].mean);
    m["norm.nwp." + name + ".std"] = exact(nets.norm.nwp[index_of(var)].std);
    for (std::size_t s = 0; s < nets.stations.size(); ++s) {
      const auto& st = nets.norm.obs[s][index_of(var)];
      m["norm.obs." + std::to_string(s) + "." + name + ".mean"] = exact(st.mean);
      m["norm.obs." + std::to_string(s) + "." + name + ".std"] = exact(st.std);
    }
  }
  const TemporalShape& t = nets.temporal.front().shape();
  m["temporal.history_width"] = std::to_string(t.history_width);
  m["temporal.future_width"] = std::to_string(t.future_width);
  m["temporal.lstm_hidden"] = std::to_string(t.lstm_hidden);
  m["temporal.history_expansion"] = std::to_string(t.history_expansion);
  m["temporal.future_expansion"] = std::to_string(t.future_expansion);
  if (!nets.spatial.empty()) {
    const SpatialShape& sp = nets.spatial.front().shape();
    m["spatial.filters"] = std::to_string(sp.filters);
    m["spatial.kernel"] = std::to_string(sp.kernel);
    m["spatial.pool"] = std::to_string(sp.pool);
  }
  return m;
}

Checkpoint pack(std::map<std::string, std::string> meta, const std::vector<NamedParam>& params) {
  Checkpoint c;
  c.metadata = std::move(meta);
  for (const auto& p : params) c.tensors.emplace_back(p.name, p.var->value);
  return c;
}

void unpack(const Checkpoint& c, const std::vector<NamedParam>& params, const std::string& file) {
  if (c.tensors.size() != params.size()) throw DataError(file + ": parameter count mismatch");
  for (const auto& p : params) {
    const Tensor& t = c.tensor(p.name);
    if (t.shape() != p.var->value.shape()) {
      throw DataError(file + ": shape mismatch for " + p.name + " (" + shape_string(t.shape()) +
                      " vs " + shape_string(p.var->value.shape()) + ")");
    }
    auto dst = p.var->value.values();
    auto src = t.values();
    std::copy(src.begin(), src.end(), dst.begin());
  }
}

Stage parse_stage(const std::string& s) {
  for (auto st : {Stage::temporal, Stage::spatial, Stage::ensemble}) {
    if (stage_name(st) == s) return st;
  }
  throw DataError("checkpoint: unknown stage '" + s + "'");
}

}  // namespace

const std::string& Checkpoint::meta(const std::string& key) const {
  auto it = metadata.find(key);
  if (it == metadata.end()) throw DataError("checkpoint: missing metadata key '" + key + "'");
  return it->second;
}

const Tensor& Checkpoint::tensor(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return t;
  }
  throw DataError("checkpoint: missing tensor '" + name + "'");
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.metadata.size()));
  for (const auto& [k, v] : ckpt.metadata) {
    put_string(out, k);
    put_string(out, v);
  }
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, t] : ckpt.tensors) {
    put_string(out, name);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
    for (auto d : t.shape()) put<std::uint64_t>(out, d);
    const auto v = t.values();
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw DataError(path.string() + ": not a checkpoint");
  }
  const auto version = get<std::uint32_t>(in, "version");
  if (version != kCheckpointVersion) {
    throw DataError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint c;
  const auto n_meta = get<std::uint32_t>(in, "metadata count");
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    auto k = get_string(in);
    c.metadata[std::move(k)] = get_string(in);
  }
  const auto n_tensors = get<std::uint32_t>(in, "tensor count");
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    auto name = get_string(in);
    const auto rank = get<std::uint32_t>(in, "rank");
    if (rank > 8) throw DataError(path.string() + ": corrupt tensor rank");
    Shape shape;
    for (std::uint32_t d = 0; d < rank; ++d) shape.push_back(get<std::uint64_t>(in, "dim"));
    Tensor t(shape);
    auto v = t.values();
    if (!in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)))) {
      throw IoError("truncated checkpoint: " + path.string());
    }
    c.tensors.emplace_back(std::move(name), std::move(t));
  }
  return c;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, Variable target,
                                      std::string_view station, Stage net) {
  return dir / (std::string(variable_name(target)) + "." + std::string(station) + "." +
                std::string(stage_name(net)) + ".ckpt");
}

std::vector<std::filesystem::path> save_station_nets(const std::filesystem::path& dir,
                                                     const StationNets& nets) {
  if (nets.temporal.size() != nets.stations.size()) throw StateError("save: temporal nets missing");
  std::filesystem::create_directories(dir);
  const auto shared = shared_metadata(nets);
  std::vector<std::filesystem::path> written;
  auto save = [&](std::size_t s, Stage net, const std::vector<NamedParam>& params) {
    auto meta = shared;
    meta["station"] = nets.stations[s];
    meta["station_index"] = std::to_string(s);
    meta["net"] = stage_name(net);
    auto path = checkpoint_path(dir, nets.target(), nets.stations[s], net);
    write_checkpoint(path, pack(std::move(meta), params));
    written.push_back(std::move(path));
  };
  for (std::size_t s = 0; s < nets.stations.size(); ++s) {
    save(s, Stage::temporal, nets.temporal[s].parameters());
    if (s < nets.spatial.size()) save(s, Stage::spatial, nets.spatial[s].parameters());
    if (s < nets.ensemble.size()) save(s, Stage::ensemble, nets.ensemble[s].parameters());
  }
  return written;
}

StationNets load_station_nets(const std::filesystem::path& dir, Variable target) {
  StationNets nets;
  // The station order lives in every file; find any temporal checkpoint first.
  std::filesystem::path first;
  const std::string prefix = std::string(variable_name(target)) + ".";
  if (!std::filesystem::is_directory(dir)) throw IoError("no checkpoint directory " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && name.ends_with(".temporal.ckpt")) {
      if (first.empty() || entry.path() < first) first = entry.path();
    }
  }
  if (first.empty()) {
    throw IoError("no " + std::string(variable_name(target)) + " checkpoints in " + dir.string());
  }
  const Checkpoint head = read_checkpoint(first);
  if (parse_variable(head.meta("target")) != target) throw DataError(first.string() + ": wrong target");
  nets.stations = split(head.meta("stations"));
  nets.spec.target = target;
  nets.spec.history = parse_size(head.meta("history"));
  nets.spec.horizon = parse_size(head.meta("horizon"));
  nets.spec.fct_hour = static_cast<int>(parse_size(head.meta("fct_hour")));
  nets.spec.history_covariates = parse_variable_list(head.meta("history_covariates"));
  nets.spec.future_covariates = parse_variable_list(head.meta("future_covariates"));
  nets.trained_through = parse_stage(head.meta("trained_through"));
  nets.norm.fitted_on = {parse_size(head.meta("norm.begin")), parse_size(head.meta("norm.end"))};
  nets.norm.obs.resize(nets.stations.size());
  for (auto var : kAllVariables) {
    const std::string name(variable_name(var));
    nets.norm.nwp[index_of(var)] = {parse_double(head.meta("norm.nwp." + name + ".mean")),
                                    parse_double(head.meta("norm.nwp." + name + ".std"))};
    for (std::size_t s = 0; s < nets.stations.size(); ++s) {
      const std::string key = "norm.obs." + std::to_string(s) + "." + name;
      nets.norm.obs[s][index_of(var)] = {parse_double(head.meta(key + ".mean")),
                                         parse_double(head.meta(key + ".std"))};
    }
  }

  TemporalShape tshape;
  tshape.history_steps = nets.spec.history;
  tshape.horizon = nets.spec.horizon;
  tshape.history_width = parse_size(head.meta("temporal.history_width"));
  tshape.future_width = parse_size(head.meta("temporal.future_width"));
  tshape.lstm_hidden = parse_size(head.meta("temporal.lstm_hidden"));
  tshape.history_expansion = parse_size(head.meta("temporal.history_expansion"));
  tshape.future_expansion = parse_size(head.meta("temporal.future_expansion"));
  SpatialShape sshape;
  if (nets.trained_through >= Stage::spatial) {
    sshape.representation = tshape.representation_size();
    sshape.stations = nets.stations.size();
    sshape.horizon = nets.spec.horizon;
    sshape.filters = parse_size(head.meta("spatial.filters"));
    sshape.kernel = parse_size(head.meta("spatial.kernel"));
    sshape.pool = parse_size(head.meta("spatial.pool"));
  }

  Rng placeholder(0);
  const std::string stations_joined = join(nets.stations);
  auto load = [&](std::size_t s, Stage net, const std::vector<NamedParam>& params) {
    const auto path = checkpoint_path(dir, target, nets.stations[s], net);
    const Checkpoint c = read_checkpoint(path);
    if (c.meta("stations") != stations_joined || c.meta("net") != stage_name(net) ||
        parse_size(c.meta("station_index")) != s) {
      throw DataError(path.string() + ": metadata disagrees with " + first.filename().string());
    }
    unpack(c, params, path.string());
  };
  for (std::size_t s = 0; s < nets.stations.size(); ++s) {
    nets.temporal.emplace_back(tshape, placeholder);
    load(s, Stage::temporal, nets.temporal.back().parameters());
    if (nets.trained_through >= Stage::spatial) {
      nets.spatial.emplace_back(sshape, placeholder);
      load(s, Stage::spatial, nets.spatial.back().parameters());
    }
    if (nets.trained_through >= Stage::ensemble) {
      nets.ensemble.emplace_back(nets.spec.horizon);
      load(s, Stage::ensemble, nets.ensemble.back().parameters());
    }
  }
  return nets;
}

}  // namespace mhstn
