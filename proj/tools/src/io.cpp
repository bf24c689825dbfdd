#include "dsep/cli/io.hpp"

#include <fstream>
#include <string>
#include <system_error>

#include "dsep/error.hpp"

namespace dsep::cli {

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::InvalidArgument, "cannot move '" + tmp.string() + "' to '" + path.string() + "'");
}

}  // namespace dsep::cli
