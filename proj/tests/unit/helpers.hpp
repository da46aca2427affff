#pragma once

#include "citenorm/corpus.hpp"
#include "citenorm/journals.hpp"
#include "citenorm/refmatch.hpp"

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include <unistd.h>

namespace testing {

inline citenorm::Journal journal(std::string id, std::vector<std::string> abbrevs, std::string field = "F",
                                 std::map<int, std::int64_t> items = {})
{
    citenorm::Journal j;
    j.journal_id = id;
    j.full_name = "Journal " + id;
    j.abbreviations = std::move(abbrevs);
    j.field_code = std::move(field);
    j.items_by_year = std::move(items);
    return j;
}

inline citenorm::Document doc(std::string id, std::string journal, int year, std::vector<std::string> refs,
                              std::int64_t nref = -1)
{
    citenorm::Document d;
    d.doc_id = std::move(id);
    d.journal_id = std::move(journal);
    d.pub_year = year;
    for (auto& r : refs) {
        d.refs.push_back({std::move(r), std::nullopt});
    }
    d.ref_count = nref < 0 ? static_cast<std::int64_t>(d.refs.size()) : nref;
    return d;
}

inline citenorm::Corpus resolved(std::vector<citenorm::Document> docs, const citenorm::JournalTable& journals,
                                 int census = 2010)
{
    citenorm::Corpus c;
    c.census_year = census;
    c.documents = std::move(docs);
    citenorm::resolve_references(c, journals);
    return c;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
        : path_(std::filesystem::temp_directory_path()
                / ("citenorm_unit_" + tag + "_" + std::to_string(::getpid())))
    {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

} // namespace testing
