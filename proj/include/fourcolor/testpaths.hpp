#pragma once

#include <cstdlib>
#include <string>

namespace fourcolor {

/// Repo data directory for tests and defaults; overridable via FOURCOLOR_DATA.
inline std::string test_data_dir() {
    if (const char* env = std::getenv("FOURCOLOR_DATA")) return env;
#ifdef FOURCOLOR_DATA_DIR
    return FOURCOLOR_DATA_DIR;
#else
    return "data";
#endif
}

}  // namespace fourcolor
