#pragma once

#include <stdexcept>
#include <string>

namespace kqm::cli {

// Exclusive claim on an output directory via an O_EXCL lock file. The file
// holds the owner's pid and is removed on destruction.
class DirectoryLock {
  public:
    explicit DirectoryLock(const std::string& dir);
    ~DirectoryLock();
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

    static constexpr const char* kName = ".kramers-qm.lock";
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

struct LockBusy : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kqm::cli
