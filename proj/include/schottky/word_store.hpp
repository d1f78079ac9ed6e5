#pragma once

// Per-group container for word tables with an optional on-disk cache.
// The cache is an optimization only: records are stored as raw doubles,
// so a cached table reproduces the enumerated one bit for bit.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/schottky_group.hpp"
#include "schottky/util.hpp"
#include "schottky/words.hpp"

namespace schottky {

namespace detail {

inline constexpr char kWordCacheMagic[9] = "SGWCACHE";
inline constexpr std::uint32_t kWordCacheVersion = 1;

struct WordCacheHeader {
    char magic[8];
    std::uint32_t version;
    std::uint32_t rank;
    std::uint32_t word_length;
    std::uint32_t reserved;
    std::uint64_t count;
    std::uint64_t fingerprint;
};

}  // namespace detail

class WordStore {
public:
    explicit WordStore(const SchottkyGroup& group, std::string cache_dir = {},
                       std::uint64_t budget = 10000000)
        : group_(&group), cache_dir_(std::move(cache_dir)), budget_(budget) {}

    const SchottkyGroup& group() const { return *group_; }
    std::uint64_t budget() const { return budget_; }

    const WordTable& table(int n) {
        auto it = tables_.find(n);
        if (it != tables_.end()) return it->second;
        if (!cache_dir_.empty()) {
            WordTable cached(group_->rank(), n);
            if (load_cache(n, cached)) return tables_.emplace(n, std::move(cached)).first->second;
        }
        WordTable fresh = enumerate_admissible_cyclic(*group_, n, budget_);
        if (!cache_dir_.empty()) save_cache(fresh);
        return tables_.emplace(n, std::move(fresh)).first->second;
    }

private:
    std::string cache_path(int n) const {
        return (std::filesystem::path(cache_dir_) /
                ("words_" + format_hex16(group_->fingerprint()) + "_n" + std::to_string(n) + ".bin"))
            .string();
    }

    bool load_cache(int n, WordTable& out) const {
        std::ifstream in(cache_path(n), std::ios::binary);
        if (!in) return false;
        detail::WordCacheHeader h{};
        in.read(reinterpret_cast<char*>(&h), sizeof(h));
        if (!in || std::memcmp(h.magic, detail::kWordCacheMagic, 8) != 0 ||
            h.version != detail::kWordCacheVersion || h.rank != static_cast<std::uint32_t>(group_->rank()) ||
            h.word_length != static_cast<std::uint32_t>(n) || h.fingerprint != group_->fingerprint())
            return false;
        const std::size_t count = h.count;
        std::vector<std::uint8_t> letters(count * n);
        std::vector<double> ell(count);
        std::vector<int> abel(count * group_->rank());
        in.read(reinterpret_cast<char*>(letters.data()), static_cast<std::streamsize>(letters.size()));
        in.read(reinterpret_cast<char*>(ell.data()), static_cast<std::streamsize>(ell.size() * sizeof(double)));
        in.read(reinterpret_cast<char*>(abel.data()), static_cast<std::streamsize>(abel.size() * sizeof(int)));
        if (!in) return false;
        for (std::size_t row = 0; row < count; ++row)
            out.append(letters.data() + row * n, ell[row], abel.data() + row * group_->rank());
        return true;
    }

    void save_cache(const WordTable& t) const {
        std::error_code ec;
        std::filesystem::create_directories(cache_dir_, ec);
        const std::string path = cache_path(t.word_length());
        const std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) return;  // cache is best-effort
            detail::WordCacheHeader h{};
            std::memcpy(h.magic, detail::kWordCacheMagic, 8);
            h.version = detail::kWordCacheVersion;
            h.rank = static_cast<std::uint32_t>(t.rank());
            h.word_length = static_cast<std::uint32_t>(t.word_length());
            h.count = t.count();
            h.fingerprint = group_->fingerprint();
            out.write(reinterpret_cast<const char*>(&h), sizeof(h));
            out.write(reinterpret_cast<const char*>(t.raw_letters().data()),
                      static_cast<std::streamsize>(t.raw_letters().size()));
            out.write(reinterpret_cast<const char*>(t.raw_lengths().data()),
                      static_cast<std::streamsize>(t.raw_lengths().size() * sizeof(double)));
            out.write(reinterpret_cast<const char*>(t.raw_abelianizations().data()),
                      static_cast<std::streamsize>(t.raw_abelianizations().size() * sizeof(int)));
            if (!out) return;
        }
        std::filesystem::rename(tmp, path, ec);  // single-writer: create then rename
        if (ec) std::filesystem::remove(tmp, ec);
    }

    const SchottkyGroup* group_;
    std::string cache_dir_;
    std::uint64_t budget_;
    std::map<int, WordTable> tables_;
};

}  // namespace schottky
