#include "unlearn/records.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "unlearn/errors.hpp"

namespace unlearn {

std::string to_string(Origin o) {
    return o == Origin::Seen ? "seen" : "not_seen";
}

Origin origin_from_string(const std::string& name) {
    if (name == "seen") return Origin::Seen;
    if (name == "not_seen") return Origin::NotSeen;
    throw InvalidParam("unknown origin '" + name + "'");
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_records_csv(const std::vector<LogitRecord>& records,
                       const std::filesystem::path& path) {
    if (records.empty())
        throw EmptyInput("write_records_csv: no records");
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());

    out << "model_id,origin,true_class";
    for (std::size_t i = 0; i < records.front().logits.size(); ++i)
        out << ",l" << i;
    out << "\n";
    for (const auto& rec : records) {
        out << rec.model_id << ',' << to_string(rec.origin) << ',' << rec.true_class;
        for (double v : rec.logits) out << ',' << format_double(v);
        out << "\n";
    }
    if (!out)
        throw IoError("failed writing " + path.string());
}

std::vector<LogitRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw TruncatedFile("empty records file " + path.string());

    std::vector<LogitRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        LogitRecord rec;
        std::getline(ss, field, ',');
        rec.model_id = std::stoi(field);
        std::getline(ss, field, ',');
        rec.origin = origin_from_string(field);
        std::getline(ss, field, ',');
        rec.true_class = std::stoi(field);
        while (std::getline(ss, field, ','))
            rec.logits.push_back(std::stod(field));
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace unlearn
