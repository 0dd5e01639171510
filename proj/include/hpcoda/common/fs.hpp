#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <type_traits>
#include <unistd.h>

#include "hpcoda/common/error.hpp"

namespace hpcoda {

// Writes via a temporary sibling file and renames it into place, so an
// interrupted run never leaves a partial output file.
template <class WriteFn>
auto write_file_atomic(const std::filesystem::path& path, WriteFn&& write) {
  namespace fs = std::filesystem;
  if (path.has_parent_path() && !path.parent_path().empty()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
  try {
    auto commit = [&] {
      out.flush();
      if (!out) throw IoError("write failed: " + tmp.string());
      out.close();
      std::error_code ec;
      fs::rename(tmp, path, ec);
      if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    };
    if constexpr (std::is_void_v<decltype(write(out))>) {
      write(out);
      commit();
    } else {
      auto result = write(out);
      commit();
      return result;
    }
  } catch (...) {
    out.close();
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

}  // namespace hpcoda
