#include "lightdoa/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

namespace lightdoa::model {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("checkpoint: " + what);
}

// This code targets little-endian hosts; the on-disk layout is the host
// layout of the integer/float types below.
template <typename V>
void write_pod(std::ostream& os, V v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(V));
}

template <typename V>
V read_pod(std::istream& is) {
  V v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(V));
  if (!is) fail("truncated file");
  return v;
}

void write_string(std::ostream& os, const std::string& s) {
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& is) {
  const auto len = read_pod<std::uint32_t>(is);
  if (len > (1u << 20)) fail("implausible string length");
  std::string s(len, '\0');
  is.read(s.data(), len);
  if (!is) fail("truncated file");
  return s;
}

template <typename T>
void write_data(std::ostream& os, const nn::Tensor<T>& t) {
  os.write(reinterpret_cast<const char*>(t.ptr()),
           static_cast<std::streamsize>(t.numel() * sizeof(T)));
}

template <typename T>
void read_data(std::istream& is, int dtype_bytes, nn::Tensor<T>& t) {
  if (dtype_bytes == static_cast<int>(sizeof(T))) {
    is.read(reinterpret_cast<char*>(t.ptr()),
            static_cast<std::streamsize>(t.numel() * sizeof(T)));
  } else if (dtype_bytes == 4) {
    std::vector<float> tmp(t.numel());
    is.read(reinterpret_cast<char*>(tmp.data()),
            static_cast<std::streamsize>(tmp.size() * sizeof(float)));
    for (std::size_t i = 0; i < tmp.size(); ++i) t[i] = static_cast<T>(tmp[i]);
  } else if (dtype_bytes == 8) {
    std::vector<double> tmp(t.numel());
    is.read(reinterpret_cast<char*>(tmp.data()),
            static_cast<std::streamsize>(tmp.size() * sizeof(double)));
    for (std::size_t i = 0; i < tmp.size(); ++i) t[i] = static_cast<T>(tmp[i]);
  } else {
    fail("unsupported scalar width");
  }
  if (!is) fail("truncated file");
}

void write_shape(std::ostream& os, const std::vector<int>& shape) {
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(shape.size()));
  for (int d : shape) write_pod<std::int32_t>(os, d);
}

std::vector<int> read_shape(std::istream& is) {
  const auto ndim = read_pod<std::uint32_t>(is);
  if (ndim > 8) fail("implausible rank");
  std::vector<int> shape(ndim);
  for (auto& d : shape) d = read_pod<std::int32_t>(is);
  return shape;
}

}  // namespace

template <typename T>
void save_checkpoint(LightDoaModel<T>& m, const std::string& rng_state,
                     const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail("cannot open for writing: " + path.string());

  os.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  write_pod<std::uint8_t>(os, kCheckpointVersion);
  write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(sizeof(T)));
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(m.num_classes()));

  const auto params = m.params();
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(params.size()));
  for (const nn::Parameter<T>* p : params) {
    write_string(os, p->name);
    write_shape(os, p->value.shape);
    write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(p->step_count));
    write_data(os, p->value);
    write_data(os, p->adam_m);
    write_data(os, p->adam_v);
  }

  const auto buffers = m.named_buffers();
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(buffers.size()));
  for (const auto& [name, tensor] : buffers) {
    write_string(os, name);
    write_shape(os, tensor->shape);
    write_data(os, *tensor);
  }

  write_string(os, rng_state);
  if (!os) fail("write failure: " + path.string());
}

template <typename T>
LoadedCheckpoint<T> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail("cannot open: " + path.string());

  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    fail("bad magic: " + path.string());
  const auto version = read_pod<std::uint8_t>(is);
  if (version != kCheckpointVersion) fail("unsupported version");
  const int dtype = read_pod<std::uint8_t>(is);
  const int k = static_cast<int>(read_pod<std::uint32_t>(is));

  LoadedCheckpoint<T> out{LightDoaModel<T>(k), {}};

  std::map<std::string, nn::Parameter<T>*> by_name;
  for (nn::Parameter<T>* p : out.model.params()) by_name[p->name] = p;

  const auto n_params = read_pod<std::uint32_t>(is);
  if (n_params != by_name.size()) fail("parameter count mismatch");
  for (std::uint32_t i = 0; i < n_params; ++i) {
    const std::string name = read_string(is);
    auto it = by_name.find(name);
    if (it == by_name.end()) fail("unknown parameter: " + name);
    nn::Parameter<T>* p = it->second;
    if (read_shape(is) != p->value.shape) fail("shape mismatch for " + name);
    p->step_count = static_cast<long long>(read_pod<std::uint64_t>(is));
    read_data(is, dtype, p->value);
    read_data(is, dtype, p->adam_m);
    read_data(is, dtype, p->adam_v);
  }

  std::map<std::string, nn::Tensor<T>*> buf_by_name;
  for (auto& [name, tensor] : out.model.named_buffers()) buf_by_name[name] = tensor;
  const auto n_buffers = read_pod<std::uint32_t>(is);
  if (n_buffers != buf_by_name.size()) fail("buffer count mismatch");
  for (std::uint32_t i = 0; i < n_buffers; ++i) {
    const std::string name = read_string(is);
    auto it = buf_by_name.find(name);
    if (it == buf_by_name.end()) fail("unknown buffer: " + name);
    if (read_shape(is) != it->second->shape) fail("shape mismatch for " + name);
    read_data(is, dtype, *it->second);
  }

  out.rng_state = read_string(is);
  return out;
}

int peek_checkpoint_k(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail("cannot open: " + path.string());
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0)
    fail("bad magic: " + path.string());
  const auto version = read_pod<std::uint8_t>(is);
  if (version != kCheckpointVersion) fail("unsupported version");
  read_pod<std::uint8_t>(is);
  return static_cast<int>(read_pod<std::uint32_t>(is));
}

template void save_checkpoint<float>(LightDoaModel<float>&, const std::string&,
                                     const std::filesystem::path&);
template void save_checkpoint<double>(LightDoaModel<double>&, const std::string&,
                                      const std::filesystem::path&);
template LoadedCheckpoint<float> load_checkpoint<float>(const std::filesystem::path&);
template LoadedCheckpoint<double> load_checkpoint<double>(const std::filesystem::path&);

}  // namespace lightdoa::model
