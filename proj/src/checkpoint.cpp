#include "ctgcn/checkpoint.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ctgcn/errors.hpp"

namespace ctgcn {

namespace {
constexpr const char* kMagic = "ctgcn-checkpoint 1";

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedParam>& params) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
  out << kMagic << "\n" << params.size() << "\n";
  for (const auto& [name, tensor] : params) {
    out << name << " " << tensor.rows() << " " << tensor.cols() << "\n";
    const Matrix& m = tensor.value();
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) {
        if (c) out << " ";
        out << format_real(m(r, c));
      }
      out << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void load_checkpoint(const std::filesystem::path& path, const std::vector<NamedParam>& params) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open checkpoint: " + path.string());
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic) throw ParseError(path.string() + ": not a ctgcn checkpoint");
  std::size_t count = 0;
  in >> count;
  if (!in || count != params.size()) {
    throw ParseError(path.string() + ": checkpoint holds " + std::to_string(count) +
                     " parameters, model expects " + std::to_string(params.size()));
  }
  std::map<std::string, Tensor> by_name;
  for (const auto& p : params) {
    if (!by_name.emplace(p.name, p.tensor).second) {
      throw std::logic_error("duplicate parameter name: " + p.name);
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::string name;
    Index rows = 0, cols = 0;
    in >> name >> rows >> cols;
    if (!in) throw ParseError(path.string() + ": truncated parameter header");
    auto it = by_name.find(name);
    if (it == by_name.end()) throw ParseError(path.string() + ": unknown parameter " + name);
    Tensor& t = it->second;
    if (t.rows() != rows || t.cols() != cols) {
      throw ParseError(path.string() + ": parameter " + name + " has shape " +
                       std::to_string(rows) + "x" + std::to_string(cols) + ", model expects " +
                       std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
    }
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) {
        if (!(in >> m(r, c))) {
          throw ParseError(path.string() + ": truncated values for parameter " + name);
        }
      }
    }
    t.mutable_value() = std::move(m);
  }
}

}  // namespace ctgcn
