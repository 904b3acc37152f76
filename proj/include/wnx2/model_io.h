#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wnx2/dsp.h"
#include "wnx2/model.h"
#include "wnx2/tensor.h"

// Persistence. The weight container ("WNX2") is little-endian:
//
//   magic "WNX2" | version u32 | count u32
//   count x { name_len u16 | name utf-8 | dtype u8 (0 = f32) | rank u8 |
//             dims u32[rank] | offset u64 }
//   zero padding to the next 64-byte boundary  <- data section start
//   tensor payloads, each at a 64-byte aligned offset relative to the
//   data section start, zero padded in between.
//
// A model directory holds manifest.json plus submodel_1.bin .. submodel_T.bin.
namespace wnx2 {

inline constexpr std::uint32_t kContainerVersion = 1;
inline constexpr std::size_t kContainerAlignment = 64;

using TensorMap = std::map<std::string, Tensor>;

std::vector<std::uint8_t> encode_container(const TensorMap& tensors);
TensorMap decode_container(std::span<const std::uint8_t> bytes);

void save_container(const TensorMap& tensors, const std::filesystem::path& path);
TensorMap load_container(const std::filesystem::path& path);

// Canonical tensor names and shapes of one sub-model, in file order.
std::vector<std::pair<std::string, Dims>> submodel_layout(const GeneratorConfig& cfg);
TensorMap to_tensor_map(const SubModelWeights& w);
// Checks every tensor against the layout; errors name "<prefix>/<tensor>".
SubModelWeights from_tensor_map(const TensorMap& tensors, const GeneratorConfig& cfg,
                                const std::string& prefix);

std::string manifest_to_json(const ModelManifest& m);
ModelManifest manifest_from_json(const std::string& text);
ModelManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const ModelManifest& m, const std::filesystem::path& path);

std::string submodel_filename(std::size_t t);

VocoderModel load_model(const std::filesystem::path& dir);
void save_model(const VocoderModel& model, const std::filesystem::path& dir);

// Normal(0, 1/sqrt(fan_in)) weights, zero biases, unit norm gains.
VocoderModel init_random(const ModelManifest& manifest, std::uint64_t seed);

// Mel features travel as a one-tensor container named "mel" [n_mels x F].
void save_mel(const MelSpectrogram& mel, const std::filesystem::path& path);
MelSpectrogram load_mel(const std::filesystem::path& path, std::size_t hop, std::size_t n_fft,
                        int sample_rate = kDefaultSampleRate);

// Post-filter container: "gains" [n_fft/2+1] and "frame" [2] = {n_fft, hop}.
void save_postfilter(const PostFilter& pf, const std::filesystem::path& path);
PostFilter load_postfilter(const std::filesystem::path& path);

// 16-bit PCM mono RIFF/WAVE.
Waveform read_wav(const std::filesystem::path& path);
void write_wav(const Waveform& w, const std::filesystem::path& path, int bit_depth = 16);
std::vector<std::uint8_t> encode_wav(const Waveform& w, int bit_depth = 16);
Waveform decode_wav(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace wnx2
