#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ccnlab/core/error.hpp"
#include "ccnlab/nn/dense_net.hpp"

namespace ccnlab::nn {

// Layout:
//   ccnlab-densenet 1\n
//   widths <w0> <w1> ...\n
//   hidden <activation>\n
//   output <activation>\n
//   params <count>\n
//   <count little-endian IEEE-754 float64 values>

inline void write_le_doubles(std::ostream& os, const double* data, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(data[i]);
    unsigned char buf[8];
    for (int b = 0; b < 8; ++b) buf[b] = static_cast<unsigned char>(bits >> (8 * b));
    os.write(reinterpret_cast<const char*>(buf), 8);
  }
}

inline void read_le_doubles(std::istream& is, double* data, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    require(static_cast<bool>(is), "truncated parameter block");
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[b]) << (8 * b);
    data[i] = std::bit_cast<double>(bits);
  }
}

inline void save_net(std::ostream& os, const DenseNet& net) {
  os << "ccnlab-densenet 1\nwidths";
  for (int w : net.widths()) os << ' ' << w;
  os << "\nhidden " << to_string(net.hidden_activation()) << "\noutput "
     << to_string(net.output_activation()) << "\nparams " << net.params().size() << '\n';
  write_le_doubles(os, net.params().data(), static_cast<std::size_t>(net.params().size()));
}

inline DenseNet load_net(std::istream& is) {
  auto next_line = [&is](const char* key) {
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), std::string("missing header line '") + key + "'");
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    require(k == key, std::string("expected header '") + key + "', got '" + k + "'");
    std::string rest;
    std::getline(ls, rest);
    return rest;
  };
  {
    std::string magic;
    std::getline(is, magic);
    require(magic == "ccnlab-densenet 1", "not a ccnlab network file");
  }
  std::istringstream ws(next_line("widths"));
  std::vector<int> widths;
  for (int w; ws >> w;) widths.push_back(w);
  std::istringstream hs(next_line("hidden"));
  std::string hidden;
  hs >> hidden;
  std::istringstream os_(next_line("output"));
  std::string output;
  os_ >> output;
  std::istringstream ps(next_line("params"));
  long count = 0;
  ps >> count;
  DenseNet net(widths, activation_from_string(hidden), activation_from_string(output));
  require(count == net.params().size(), "parameter count does not match widths");
  read_le_doubles(is, net.params().data(), static_cast<std::size_t>(count));
  return net;
}

inline void save_net(const std::string& path, const DenseNet& net) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "cannot open " + path + " for writing");
  save_net(os, net);
}

inline DenseNet load_net(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), "cannot open " + path);
  return load_net(is);
}

}  // namespace ccnlab::nn
