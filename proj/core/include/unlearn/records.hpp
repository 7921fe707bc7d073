#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace unlearn {

/// Which pool a prediction came from: models that saw the deleted classes
/// during training (and were then filtered), or models retrained without
/// them.
enum class Origin { Seen, NotSeen };

std::string to_string(Origin o);
Origin origin_from_string(const std::string& name);

/// One pre-softmax prediction vector, the unit of the adversarial
/// evaluation. true_class is the original class index of the predicted
/// input.
struct LogitRecord {
    std::vector<double> logits;
    int true_class = 0;
    Origin origin = Origin::Seen;
    int model_id = 0;

    bool operator==(const LogitRecord&) const = default;
};

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// CSV with header model_id,origin,true_class,l0,l1,...
/// Doubles are written in shortest round-trip form.
void write_records_csv(const std::vector<LogitRecord>& records,
                       const std::filesystem::path& path);

std::vector<LogitRecord> read_records_csv(const std::filesystem::path& path);

} // namespace unlearn
