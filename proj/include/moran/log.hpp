#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace moran::logging {

enum class Level { error = 0, info = 1, debug = 2 };

/// Verbosity from MORAN_DIM_LOG (error | info | debug); defaults to error.
inline Level threshold() {
    static Level lvl = [] {
        const char* env = std::getenv("MORAN_DIM_LOG");
        if (env == nullptr) return Level::error;
        if (std::strcmp(env, "debug") == 0) return Level::debug;
        if (std::strcmp(env, "info") == 0) return Level::info;
        return Level::error;
    }();
    return lvl;
}

template <class... Args>
void log(Level lvl, const char* fmt, Args... args) {
    if (static_cast<int>(lvl) > static_cast<int>(threshold())) return;
    const char* tag = lvl == Level::error ? "error" : (lvl == Level::info ? "info" : "debug");
    std::fprintf(stderr, "[moran-dim %s] ", tag);
    std::fprintf(stderr, fmt, args...);
    std::fputc('\n', stderr);
}

template <class... Args>
void info(const char* fmt, Args... args) {
    log(Level::info, fmt, args...);
}
template <class... Args>
void debug(const char* fmt, Args... args) {
    log(Level::debug, fmt, args...);
}
template <class... Args>
void error(const char* fmt, Args... args) {
    log(Level::error, fmt, args...);
}

}  // namespace moran::logging
