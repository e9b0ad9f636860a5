#include "lightdoa/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace lightdoa::data {

namespace {

template <typename V>
void put(std::ofstream& os, V v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(V));
}

struct Reader {
  std::vector<char> bytes;
  std::size_t pos = 0;

  explicit Reader(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw WavFormatError("cannot open WAV file: " + path.string());
    bytes.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
  }

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) throw WavFormatError("truncated WAV file");
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, bytes.data() + pos, 4);
    pos += 4;
    return v;
  }

  std::uint16_t u16() {
    need(2);
    std::uint16_t v;
    std::memcpy(&v, bytes.data() + pos, 2);
    pos += 2;
    return v;
  }

  std::string tag() {
    need(4);
    std::string t(bytes.data() + pos, 4);
    pos += 4;
    return t;
  }

  void skip(std::size_t n) {
    need(n);
    pos += n;
  }
};

}  // namespace

AudioBuffer read_wav(const std::filesystem::path& path) {
  Reader r(path);
  if (r.tag() != "RIFF") throw WavFormatError("not a RIFF file: " + path.string());
  r.u32();  // riff size; chunk walk below validates the rest
  if (r.tag() != "WAVE") throw WavFormatError("not a WAVE file: " + path.string());

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  const std::int16_t* samples = nullptr;
  std::size_t sample_count = 0;

  while (r.pos + 8 <= r.bytes.size()) {
    const std::string id = r.tag();
    std::uint32_t size = r.u32();
    if (id == "fmt ") {
      if (size < 16) throw WavFormatError("malformed fmt chunk");
      const std::uint16_t format = r.u16();
      channels = r.u16();
      sample_rate = r.u32();
      r.u32();  // byte rate
      r.u16();  // block align
      const std::uint16_t bits = r.u16();
      r.skip(size - 16);
      if (format != 1 || bits != 16)
        throw WavFormatError("unsupported WAV encoding (need PCM 16-bit): " + path.string());
      have_fmt = true;
    } else if (id == "data") {
      r.need(size);
      samples = reinterpret_cast<const std::int16_t*>(r.bytes.data() + r.pos);
      sample_count = size / 2;
      r.skip(size);
    } else {
      r.skip(size + (size & 1));  // chunks are word-aligned
    }
    if (have_fmt && samples) break;
  }

  if (!have_fmt || !samples) throw WavFormatError("missing fmt or data chunk: " + path.string());
  if (channels != 2)
    throw WavFormatError("unsupported channel count (stereo required): " + path.string());
  if (sample_rate == 0) throw WavFormatError("zero sample rate: " + path.string());
  if (sample_count % channels != 0) throw WavFormatError("ragged data chunk: " + path.string());

  const std::size_t frames = sample_count / channels;
  AudioBuffer out;
  out.sample_rate = static_cast<int>(sample_rate);
  out.channels.assign(channels, std::vector<double>(frames));
  for (std::size_t i = 0; i < frames; ++i)
    for (std::uint16_t c = 0; c < channels; ++c)
      out.channels[c][i] = static_cast<double>(samples[i * channels + c]) / 32767.0;
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer) {
  buffer.validate();
  if (buffer.num_channels() != 2)
    throw WavFormatError("write_wav: stereo buffer required");

  const std::uint16_t channels = 2;
  const std::uint32_t frames = static_cast<std::uint32_t>(buffer.num_samples());
  const std::uint32_t data_bytes = frames * channels * 2;

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw WavFormatError("cannot open for writing: " + path.string());

  os.write("RIFF", 4);
  put<std::uint32_t>(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  put<std::uint32_t>(os, 16);
  put<std::uint16_t>(os, 1);  // PCM
  put<std::uint16_t>(os, channels);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(buffer.sample_rate));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(buffer.sample_rate) * channels * 2);
  put<std::uint16_t>(os, channels * 2);
  put<std::uint16_t>(os, 16);
  os.write("data", 4);
  put<std::uint32_t>(os, data_bytes);

  for (std::uint32_t i = 0; i < frames; ++i) {
    for (int c = 0; c < channels; ++c) {
      const double v = std::clamp(buffer.channels[c][i], -1.0, 1.0);
      put<std::int16_t>(os, static_cast<std::int16_t>(std::lround(v * 32767.0)));
    }
  }
  if (!os) throw WavFormatError("write failure: " + path.string());
}

}  // namespace lightdoa::data
