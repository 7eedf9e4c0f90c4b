#include "procmine/io.hpp"

#include <fstream>
#include <sstream>

#include "procmine/error.hpp"

namespace procmine {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename onto '" + path.string() + "': " + ec.message());
    }
}

}  // namespace procmine
