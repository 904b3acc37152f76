#include "wnx2/model_io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>
#include <set>

#include "json.hpp"

#include "wnx2/error.h"

namespace wnx2 {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'W', 'N', 'X', '2'};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    bytes_.insert(bytes_.end(), b, b + n);
  }
  void pad_to(std::size_t n) {
    if (bytes_.size() < n) bytes_.resize(n, 0);
  }
  std::size_t size() const { return bytes_.size(); }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

// Reads past the end raise the supplied error.
class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, std::function<void()> on_short)
      : bytes_(bytes), on_short_(std::move(on_short)) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  void skip(std::size_t n) { take(n); }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) {
    if (n > remaining()) on_short_();
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const std::uint8_t> bytes_;
  std::function<void()> on_short_;
  std::size_t pos_ = 0;
};

std::size_t align_up(std::size_t n, std::size_t a) { return (n + a - 1) / a * a; }

void append_f32(ByteWriter& w, std::span<const float> values) {
  for (float v : values) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    w.u32(bits);
  }
}

float f32_at(const std::uint8_t* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

struct Record {
  std::string name;
  Dims dims;
  std::uint64_t offset = 0;
  std::uint64_t bytes = 0;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::vector<std::uint8_t> encode_container(const TensorMap& tensors) {
  ByteWriter w;
  w.raw(kMagic, 4);
  w.u32(kContainerVersion);
  w.u32(static_cast<std::uint32_t>(tensors.size()));

  std::uint64_t offset = 0;
  for (const auto& [name, t] : tensors) {
    if (name.empty() || name.size() > 0xFFFF) {
      throw ValidationError("container: invalid tensor name length " + std::to_string(name.size()));
    }
    if (t.rank() < 1 || t.rank() > 3) {
      throw ShapeError("container: tensor \"" + name + "\" has unsupported rank");
    }
    w.u16(static_cast<std::uint16_t>(name.size()));
    w.raw(name.data(), name.size());
    w.u8(0);
    w.u8(static_cast<std::uint8_t>(t.rank()));
    for (auto d : t.dims()) w.u32(static_cast<std::uint32_t>(d));
    w.u64(offset);
    offset = align_up(offset + t.size() * 4, kContainerAlignment);
  }
  const std::size_t data_start = align_up(w.size(), kContainerAlignment);
  w.pad_to(data_start);
  for (const auto& [name, t] : tensors) {
    w.pad_to(align_up(w.size(), kContainerAlignment));
    append_f32(w, t.data());
  }
  return w.take();
}

TensorMap decode_container(std::span<const std::uint8_t> bytes) {
  auto truncated = [&] {
    throw ContainerError(ContainerErrc::truncated,
                         "container ends early (" + std::to_string(bytes.size()) + " bytes)");
  };
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ContainerError(ContainerErrc::bad_magic, "expected \"WNX2\"");
  }
  ByteReader r(bytes, truncated);
  r.skip(4);
  const auto version = r.u32();
  if (version != kContainerVersion) {
    throw ContainerError(ContainerErrc::unsupported_version, "version " + std::to_string(version));
  }
  const auto count = r.u32();

  std::vector<Record> records;
  std::set<std::string> names;
  for (std::uint32_t i = 0; i < count; ++i) {
    Record rec;
    const auto name_len = r.u16();
    if (name_len == 0) throw ContainerError(ContainerErrc::bad_record, "empty tensor name");
    const auto name = r.take(name_len);
    rec.name.assign(name.begin(), name.end());
    if (!names.insert(rec.name).second) {
      throw ContainerError(ContainerErrc::duplicate_name, rec.name);
    }
    const auto dtype = r.u8();
    if (dtype != 0) {
      throw ContainerError(ContainerErrc::bad_record,
                           rec.name + ": unsupported dtype " + std::to_string(dtype));
    }
    const auto rank = r.u8();
    if (rank < 1 || rank > 3) {
      throw ContainerError(ContainerErrc::bad_record,
                           rec.name + ": unsupported rank " + std::to_string(rank));
    }
    std::uint64_t volume = 1;
    for (int k = 0; k < rank; ++k) {
      const auto d = r.u32();
      if (d == 0) throw ContainerError(ContainerErrc::bad_record, rec.name + ": zero extent");
      rec.dims.push_back(d);
      volume *= d;
      if (volume > (std::uint64_t{1} << 40)) {
        throw ContainerError(ContainerErrc::bad_record, rec.name + ": tensor too large");
      }
    }
    rec.offset = r.u64();
    rec.bytes = volume * 4;
    if (rec.offset % kContainerAlignment != 0) {
      throw ContainerError(ContainerErrc::bad_record, rec.name + ": offset not 64-byte aligned");
    }
    records.push_back(std::move(rec));
  }

  const std::size_t data_start = align_up(r.pos(), kContainerAlignment);
  if (bytes.size() < data_start) truncated();
  const std::uint64_t data_size = bytes.size() - data_start;
  for (const auto& rec : records) {
    if (rec.offset > data_size || rec.bytes > data_size - rec.offset) {
      throw ContainerError(ContainerErrc::truncated,
                           rec.name + " extends past the end of the file");
    }
  }
  std::vector<const Record*> by_offset;
  for (const auto& rec : records) by_offset.push_back(&rec);
  std::ranges::sort(by_offset, {}, &Record::offset);
  for (std::size_t i = 1; i < by_offset.size(); ++i) {
    if (by_offset[i - 1]->offset + by_offset[i - 1]->bytes > by_offset[i]->offset) {
      throw ContainerError(ContainerErrc::overlapping_records,
                           by_offset[i - 1]->name + " overlaps " + by_offset[i]->name);
    }
  }

  TensorMap out;
  for (const auto& rec : records) {
    const std::uint8_t* p = bytes.data() + data_start + rec.offset;
    std::vector<float> values(rec.bytes / 4);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = f32_at(p + 4 * i);
    out.emplace(rec.name, Tensor(rec.dims, std::move(values)));
  }
  return out;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

void save_container(const TensorMap& tensors, const fs::path& path) {
  write_file(path, encode_container(tensors));
}

TensorMap load_container(const fs::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_container(bytes);
  } catch (const ContainerError& e) {
    throw ContainerError(e.code(), path.string() + ": " + e.detail());
  }
}

std::vector<std::pair<std::string, Dims>> submodel_layout(const GeneratorConfig& cfg) {
  const std::size_t d = cfg.hidden_dim;
  const std::size_t inter = cfg.intermediate_dim;
  std::vector<std::pair<std::string, Dims>> layout;
  layout.emplace_back("embed.weight", Dims{d, cfg.input_channels(), cfg.kernel});
  layout.emplace_back("embed.bias", Dims{d});
  for (std::size_t i = 0; i < cfg.n_blocks; ++i) {
    const std::string p = "blocks." + std::to_string(i) + ".";
    layout.emplace_back(p + "dwconv.weight", Dims{d, 1, cfg.kernel});
    layout.emplace_back(p + "dwconv.bias", Dims{d});
    layout.emplace_back(p + "norm.weight", Dims{d});
    layout.emplace_back(p + "norm.bias", Dims{d});
    layout.emplace_back(p + "pwconv1.weight", Dims{inter, d});
    layout.emplace_back(p + "pwconv1.bias", Dims{inter});
    layout.emplace_back(p + "pwconv2.weight", Dims{d, inter});
    layout.emplace_back(p + "pwconv2.bias", Dims{d});
  }
  layout.emplace_back("final_norm.weight", Dims{d});
  layout.emplace_back("final_norm.bias", Dims{d});
  layout.emplace_back("head.weight", Dims{cfg.hop, d});
  layout.emplace_back("head.bias", Dims{cfg.hop});
  return layout;
}

TensorMap to_tensor_map(const SubModelWeights& w) {
  TensorMap m;
  m["embed.weight"] = w.embed.weight;
  m["embed.bias"] = w.embed.bias;
  for (std::size_t i = 0; i < w.blocks.size(); ++i) {
    const auto& b = w.blocks[i];
    const std::string p = "blocks." + std::to_string(i) + ".";
    m[p + "dwconv.weight"] = b.dwconv.weight;
    m[p + "dwconv.bias"] = b.dwconv.bias;
    m[p + "norm.weight"] = b.norm_gamma;
    m[p + "norm.bias"] = b.norm_beta;
    m[p + "pwconv1.weight"] = b.up_weight;
    m[p + "pwconv1.bias"] = b.up_bias;
    m[p + "pwconv2.weight"] = b.down_weight;
    m[p + "pwconv2.bias"] = b.down_bias;
  }
  m["final_norm.weight"] = w.final_norm_gamma;
  m["final_norm.bias"] = w.final_norm_beta;
  m["head.weight"] = w.head_weight;
  m["head.bias"] = w.head_bias;
  return m;
}

SubModelWeights from_tensor_map(const TensorMap& tensors, const GeneratorConfig& cfg,
                                const std::string& prefix) {
  const auto layout = submodel_layout(cfg);
  for (const auto& [name, dims] : layout) {
    const auto it = tensors.find(name);
    if (it == tensors.end()) throw ValidationError(prefix + "/" + name + ": missing tensor");
    if (it->second.dims() != dims) {
      throw ShapeError(prefix + "/" + name + ": shape mismatch, expected " + shape_string(dims) +
                       ", got " + it->second.shape());
    }
  }
  if (tensors.size() != layout.size()) {
    for (const auto& [name, t] : tensors) {
      const bool known = std::ranges::any_of(layout, [&](const auto& e) { return e.first == name; });
      if (!known) throw ValidationError(prefix + "/" + name + ": unexpected tensor");
    }
  }

  const auto get = [&](const std::string& name) { return tensors.at(name); };
  SubModelWeights w;
  w.embed = {get("embed.weight"), get("embed.bias"), 1};
  for (std::size_t i = 0; i < cfg.n_blocks; ++i) {
    const std::string p = "blocks." + std::to_string(i) + ".";
    ConvNeXtBlockWeights b;
    b.dwconv = {get(p + "dwconv.weight"), get(p + "dwconv.bias"), cfg.hidden_dim};
    b.norm_gamma = get(p + "norm.weight");
    b.norm_beta = get(p + "norm.bias");
    b.up_weight = get(p + "pwconv1.weight");
    b.up_bias = get(p + "pwconv1.bias");
    b.down_weight = get(p + "pwconv2.weight");
    b.down_bias = get(p + "pwconv2.bias");
    w.blocks.push_back(std::move(b));
  }
  w.final_norm_gamma = get("final_norm.weight");
  w.final_norm_beta = get("final_norm.bias");
  w.head_weight = get("head.weight");
  w.head_bias = get("head.bias");
  return w;
}

std::string manifest_to_json(const ModelManifest& m) {
  const auto& g = m.generator;
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["mode"] = to_string(m.mode);
  j["iterations"] = m.iterations;
  j["n_mels"] = g.n_mels;
  j["n_fft"] = g.n_fft;
  j["hop"] = g.hop;
  j["hidden_dim"] = g.hidden_dim;
  j["intermediate_dim"] = g.intermediate_dim;
  j["n_blocks"] = g.n_blocks;
  j["kernel"] = g.kernel;
  j["noise_channel"] = g.noise_channel;
  j["schedule"] = m.schedule.a_bar;
  j["sample_rate"] = m.sample_rate;
  return j.dump(2) + "\n";
}

ModelManifest manifest_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto field = [&](const char* key) -> const nlohmann::json& {
      if (!j.contains(key)) throw ValidationError(std::string("manifest: missing key \"") + key + "\"");
      return j.at(key);
    };
    ModelManifest m;
    m.version = field("version").get<int>();
    m.mode = parse_mode(field("mode").get<std::string>());
    m.iterations = field("iterations").get<std::size_t>();
    m.generator.n_mels = field("n_mels").get<std::size_t>();
    m.generator.n_fft = field("n_fft").get<std::size_t>();
    m.generator.hop = field("hop").get<std::size_t>();
    m.generator.hidden_dim = field("hidden_dim").get<std::size_t>();
    m.generator.intermediate_dim = field("intermediate_dim").get<std::size_t>();
    m.generator.n_blocks = field("n_blocks").get<std::size_t>();
    m.generator.kernel = field("kernel").get<std::size_t>();
    m.generator.noise_channel = field("noise_channel").get<bool>();
    m.schedule.a_bar = field("schedule").get<std::vector<double>>();
    m.sample_rate = field("sample_rate").get<int>();
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
}

ModelManifest load_manifest(const fs::path& path) {
  const auto bytes = read_file(path);
  return manifest_from_json(std::string(bytes.begin(), bytes.end()));
}

void save_manifest(const ModelManifest& m, const fs::path& path) {
  m.validate();
  const auto text = manifest_to_json(m);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string submodel_filename(std::size_t t) { return "submodel_" + std::to_string(t) + ".bin"; }

VocoderModel load_model(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("model directory not found: " + dir.string());
  const auto manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw ValidationError("model directory has no manifest.json: " + dir.string());
  }
  VocoderModel model;
  model.manifest = load_manifest(manifest_path);
  for (std::size_t t = 1; t <= model.manifest.iterations; ++t) {
    const auto path = dir / submodel_filename(t);
    if (!fs::exists(path)) {
      throw ValidationError("missing sub-model file " + path.filename().string() + " (manifest declares " +
                            std::to_string(model.manifest.iterations) + " iterations)");
    }
    model.submodels.push_back(from_tensor_map(load_container(path), model.manifest.generator,
                                              "submodel_" + std::to_string(t)));
  }
  return model;
}

void save_model(const VocoderModel& model, const fs::path& dir) {
  const auto& m = model.manifest;
  m.validate();
  if (model.submodels.size() != m.iterations) {
    throw ValidationError("save_model: " + std::to_string(model.submodels.size()) +
                          " sub-models for " + std::to_string(m.iterations) + " iterations");
  }
  std::vector<std::vector<std::uint8_t>> encoded;
  for (std::size_t t = 1; t <= m.iterations; ++t) {
    const auto tensors = to_tensor_map(model.submodels[t - 1]);
    from_tensor_map(tensors, m.generator, "submodel_" + std::to_string(t));
    encoded.push_back(encode_container(tensors));
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  save_manifest(m, dir / "manifest.json");
  for (std::size_t t = 1; t <= m.iterations; ++t) {
    write_file(dir / submodel_filename(t), encoded[t - 1]);
  }
}

VocoderModel init_random(const ModelManifest& manifest, std::uint64_t seed) {
  manifest.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VocoderModel model;
  model.manifest = manifest;
  const auto layout = submodel_layout(manifest.generator);
  for (std::size_t t = 1; t <= manifest.iterations; ++t) {
    TensorMap tensors;
    for (const auto& [name, dims] : layout) {
      Tensor tensor(dims);
      if (ends_with(name, "norm.weight")) {
        std::ranges::fill(tensor.data(), 1.0f);
      } else if (!ends_with(name, ".bias")) {
        std::size_t fan_in = 1;
        for (std::size_t k = 1; k < dims.size(); ++k) fan_in *= dims[k];
        const double std_dev = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (auto& v : tensor.data()) v = static_cast<float>(std_dev * normal(rng));
      }
      tensors.emplace(name, std::move(tensor));
    }
    model.submodels.push_back(
        from_tensor_map(tensors, manifest.generator, "submodel_" + std::to_string(t)));
  }
  return model;
}

void save_mel(const MelSpectrogram& mel, const fs::path& path) {
  if (mel.values.rank() != 2) throw ShapeError("mel must be rank 2, got " + mel.values.shape());
  save_container({{"mel", mel.values}}, path);
}

MelSpectrogram load_mel(const fs::path& path, std::size_t hop, std::size_t n_fft, int sample_rate) {
  auto tensors = load_container(path);
  const auto it = tensors.find("mel");
  if (tensors.size() != 1 || it == tensors.end()) {
    throw ValidationError(path.string() + ": expected a single tensor named \"mel\"");
  }
  if (it->second.rank() != 2) {
    throw ShapeError(path.string() + ": mel must be [n_mels x F], got " + it->second.shape());
  }
  return {std::move(it->second), sample_rate, hop, n_fft};
}

void save_postfilter(const PostFilter& pf, const fs::path& path) {
  if (pf.gains.size() != pf.n_fft / 2 + 1) {
    throw ValidationError("post-filter: " + std::to_string(pf.gains.size()) + " gains for n_fft=" +
                          std::to_string(pf.n_fft));
  }
  save_container({{"gains", Tensor({pf.gains.size()}, pf.gains)},
                  {"frame", Tensor({2}, {static_cast<float>(pf.n_fft), static_cast<float>(pf.hop)})}},
                 path);
}

PostFilter load_postfilter(const fs::path& path) {
  const auto tensors = load_container(path);
  const auto gains = tensors.find("gains");
  const auto frame = tensors.find("frame");
  if (gains == tensors.end() || frame == tensors.end() || frame->second.dims() != Dims{2} ||
      gains->second.rank() != 1) {
    throw ValidationError(path.string() + ": not a post-filter container");
  }
  PostFilter pf;
  pf.n_fft = static_cast<std::size_t>(frame->second[0]);
  pf.hop = static_cast<std::size_t>(frame->second[1]);
  pf.gains.assign(gains->second.data().begin(), gains->second.data().end());
  if (pf.gains.size() != pf.n_fft / 2 + 1) {
    throw ValidationError(path.string() + ": gain count does not match n_fft");
  }
  return pf;
}

std::vector<std::uint8_t> encode_wav(const Waveform& w, int bit_depth) {
  if (bit_depth != 16) {
    throw ValidationError("write_wav: unsupported bit depth " + std::to_string(bit_depth));
  }
  const auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  ByteWriter b;
  b.raw("RIFF", 4);
  b.u32(36 + data_bytes);
  b.raw("WAVE", 4);
  b.raw("fmt ", 4);
  b.u32(16);
  b.u16(1);
  b.u16(1);
  b.u32(static_cast<std::uint32_t>(w.sample_rate));
  b.u32(static_cast<std::uint32_t>(w.sample_rate) * 2);
  b.u16(2);
  b.u16(16);
  b.raw("data", 4);
  b.u32(data_bytes);
  for (float v : w.samples) {
    if (!std::isfinite(v)) throw ValidationError("write_wav: non-finite sample");
    const double q = std::clamp(std::round(static_cast<double>(v) * 32768.0), -32768.0, 32767.0);
    b.u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return b.take();
}

Waveform decode_wav(std::span<const std::uint8_t> bytes) {
  auto malformed = [] { throw ValidationError("malformed RIFF header"); };
  ByteReader r(bytes, malformed);
  const auto riff = r.take(4);
  r.u32();
  const auto wave = r.take(4);
  if (std::memcmp(riff.data(), "RIFF", 4) != 0 || std::memcmp(wave.data(), "WAVE", 4) != 0) {
    malformed();
  }
  bool have_fmt = false;
  Waveform w;
  while (r.remaining() >= 8) {
    const auto id = r.take(4);
    const auto size = r.u32();
    if (std::memcmp(id.data(), "fmt ", 4) == 0) {
      if (size < 16) malformed();
      const auto chunk = r.take(size);
      ByteReader f(chunk, malformed);
      const auto format = f.u16();
      const auto channels = f.u16();
      const auto rate = f.u32();
      f.u32();
      f.u16();
      const auto bits = f.u16();
      if (format != 1) throw ValidationError("unsupported codec: format tag " + std::to_string(format));
      if (bits != 16) throw ValidationError("unsupported codec: " + std::to_string(bits) + "-bit PCM");
      if (channels != 1) {
        throw ValidationError("channel count must be 1, got " + std::to_string(channels));
      }
      w.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(id.data(), "data", 4) == 0) {
      if (!have_fmt) malformed();
      const auto chunk = r.take(size);
      w.samples.resize(size / 2);
      for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const auto raw = static_cast<std::int16_t>(chunk[2 * i] | (chunk[2 * i + 1] << 8));
        w.samples[i] = static_cast<float>(raw) / 32768.0f;
      }
      return w;
    } else {
      r.skip(size);
    }
    if (size % 2 == 1 && r.remaining() > 0) r.skip(1);
  }
  throw ValidationError("malformed RIFF header: no data chunk");
}

Waveform read_wav(const fs::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_wav(bytes);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_wav(const Waveform& w, const fs::path& path, int bit_depth) {
  write_file(path, encode_wav(w, bit_depth));
}

}  // namespace wnx2
