#include "specforge/util.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <vector>

#include "specforge/errors.hpp"

namespace specforge {

std::size_t thread_budget() {
    std::size_t budget = 0;
    if (const char* env = std::getenv("SPECFORGE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 0) budget = static_cast<std::size_t>(v);
    }
    if (budget == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        budget = hw == 0 ? 1 : (hw > 8 ? 8 : hw);
    }
    return budget;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    std::size_t workers = thread_budget();
    if (workers > count) workers = count;
    if (workers <= 1 || count < 4) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string format_double(double v) {
    char buf[40];
    // 17 significant digits always round-trip binary64.
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write_file(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Internal, "cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw Error(ErrorCode::Internal, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error(ErrorCode::Internal, "rename to " + target.string() + " failed: " + ec.message());
}

} // namespace specforge
