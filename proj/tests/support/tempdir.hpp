#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace ctgcn::testsupport {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write_file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream out(p);
    out << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace ctgcn::testsupport
