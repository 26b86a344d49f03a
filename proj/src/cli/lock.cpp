#include "cli/lock.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <string>

namespace kqm::cli {

DirectoryLock::DirectoryLock(const std::string& dir) : path_((std::filesystem::path(dir) / kName).string()) {
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        if (errno == EEXIST) throw LockBusy("output directory is locked by another run: " + path_);
        throw std::runtime_error("cannot create lock " + path_ + ": " + std::strerror(errno));
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
    ::close(fd);
}

DirectoryLock::~DirectoryLock() { ::unlink(path_.c_str()); }

}  // namespace kqm::cli
