#ifndef TMSD_IO_HPP
#define TMSD_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "tmsd/sampling.hpp"
#include "tmsd/tensor.hpp"

namespace tmsd {

/// Tensor file format: a self-describing CSV.
///   line 1: tmsd-tensor,v1
///   line 2: n1,n2,n3,real|complex
///   then one entry per line in (i,j,k) row-major order (k fastest);
///   complex entries are written as re,im.
inline void save_tensor(const std::string& path, const Tensor3d& a) {
  std::ofstream out(path);
  if (!out) throw IoError("save_tensor: cannot open " + path);
  out << "tmsd-tensor,v1\n";
  out << a.n1() << ',' << a.n2() << ',' << a.n3() << ",real\n";
  char buf[64];
  for (Index i = 0; i < a.n1(); ++i)
    for (Index j = 0; j < a.n2(); ++j)
      for (Index k = 0; k < a.n3(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g\n", a(i, j, k));
        out << buf;
      }
  if (!out) throw IoError("save_tensor: write failed for " + path);
}

inline void save_tensor(const std::string& path, const Tensor3cd& a) {
  std::ofstream out(path);
  if (!out) throw IoError("save_tensor: cannot open " + path);
  out << "tmsd-tensor,v1\n";
  out << a.n1() << ',' << a.n2() << ',' << a.n3() << ",complex\n";
  char buf[128];
  for (Index i = 0; i < a.n1(); ++i)
    for (Index j = 0; j < a.n2(); ++j)
      for (Index k = 0; k < a.n3(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a(i, j, k).real(),
                      a(i, j, k).imag());
        out << buf;
      }
  if (!out) throw IoError("save_tensor: write failed for " + path);
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

}  // namespace detail

inline Tensor3d load_tensor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_tensor: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("tmsd-tensor", 0) != 0)
    throw IoError("load_tensor: bad magic in " + path);
  if (!std::getline(in, line)) throw IoError("load_tensor: missing header");
  auto hdr = detail::split_csv(line);
  if (hdr.size() != 4) throw IoError("load_tensor: malformed header");
  Index n1 = std::stol(hdr[0]), n2 = std::stol(hdr[1]), n3 = std::stol(hdr[2]);
  if (hdr[3] != "real")
    throw IoError("load_tensor: expected a real tensor in " + path);
  Tensor3d a(n1, n2, n3);
  for (Index i = 0; i < n1; ++i)
    for (Index j = 0; j < n2; ++j)
      for (Index k = 0; k < n3; ++k) {
        if (!std::getline(in, line))
          throw IoError("load_tensor: truncated file " + path);
        a(i, j, k) = std::stod(line);
      }
  return a;
}

inline nlohmann::json sample_set_to_json(const SampleSet& s,
                                         std::uint64_t seed) {
  nlohmann::json j;
  j["kind"] = s.kind == SamplingKind::tubal ? "tubal" : "elementwise";
  j["replacement"] = s.replacement;
  j["n1"] = s.n1;
  j["n3"] = s.n3;
  j["seed"] = seed;
  j["indices"] = s.indices;
  return j;
}

inline SampleSet sample_set_from_json(const nlohmann::json& j) {
  SampleSet s;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "tubal")
    s.kind = SamplingKind::tubal;
  else if (kind == "elementwise")
    s.kind = SamplingKind::elementwise;
  else
    throw IoError("sample_set_from_json: unknown kind " + kind);
  s.replacement = j.at("replacement").get<bool>();
  s.n1 = j.at("n1").get<Index>();
  s.n3 = j.at("n3").get<Index>();
  s.indices = j.at("indices").get<std::vector<Index>>();
  const Index universe = s.kind == SamplingKind::tubal ? s.n1 : s.n1 * s.n3;
  for (Index idx : s.indices)
    if (idx < 0 || idx >= universe)
      throw IoError("sample_set_from_json: index out of range");
  return s;
}

}  // namespace tmsd

#endif  // TMSD_IO_HPP
