#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>
#include <string>

#include "revpipe/pair.hpp"

namespace testutil {

inline std::filesystem::path source_dir() { return REVPIPE_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string& name) {
  return source_dir() / "data" / "fixtures" / name;
}
inline std::filesystem::path golden(const std::string& name) {
  return source_dir() / "tests" / "golden" / name;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Fresh scratch directory per test invocation.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("revpipe_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline revpipe::CommentResponsePair make_pair(const std::string& paper, int round,
                                              const std::string& reviewer, int index, int s,
                                              int c = 5, int q = 5, int r = 5) {
  revpipe::CommentResponsePair pair;
  pair.paper_id = paper;
  pair.round = round;
  pair.reviewer_id = reviewer;
  pair.comment_index = index;
  pair.comment_text = "point " + std::to_string(index);
  pair.s = s;
  pair.c = c;
  pair.q = q;
  pair.r = r;
  return pair;
}

}  // namespace testutil
