#include "orbitals/error.hpp"
#include "orbitals/stabilizer.hpp"

#include <json.hpp>

namespace orbitals {

namespace {

// Linear maps A o I that preserve a union of suborbits and lie outside G0.
// Each entry is re-verified before use, so a wrong matrix here makes the
// certificate fail instead of being trusted.
//
// Two listed matrices do not preserve their union: [[1,2],[2,1]] sends
// (1,3) to (0,5) at p = 7, and diag(1,2) sends slope 4 to 8 at p = 13. Those
// rows carry a "correction" found by searching the stabilizer of the union's
// directions; the listed matrix is still checked and its failure reported.
constexpr const char* kManifest = R"json([
  {"p": 5,  "union": "A+L1",        "matrix": [[1, 1], [1, -1]]},
  {"p": 5,  "union": "A+L2",        "matrix": [[1, 2], [2, 1]]},
  {"p": 5,  "union": "L1+L2",       "matrix": [[1, 0], [0, 2]]},

  {"p": 7,  "union": "L2",          "matrix": [[1, 2], [2, 1]], "correction": [[1, 1], [1, -1]]},
  {"p": 7,  "union": "A+L1",        "matrix": [[1, 1], [1, -1]]},
  {"p": 7,  "union": "A+L2",        "matrix": [[1, 2], [2, 1]]},
  {"p": 7,  "union": "L1+L2",       "matrix": [[1, 0], [0, 2]]},

  {"p": 13, "union": "L1",          "matrix": [[1, 2], [2, 1]]},
  {"p": 13, "union": "L2",          "matrix": [[1, 1], [5, -5]]},
  {"p": 13, "union": "L3",          "matrix": [[1, 1], [5, -5]]},
  {"p": 13, "union": "L5",          "matrix": [[1, 1], [1, -1]]},
  {"p": 13, "union": "L1+L2",       "matrix": [[1, 4], [4, -1]]},
  {"p": 13, "union": "L1+L3",       "matrix": [[1, 0], [0, 4]]},
  {"p": 13, "union": "L1+L5",       "matrix": [[1, 0], [0, 5]]},
  {"p": 13, "union": "L2+L3",       "matrix": [[1, 1], [5, -5]]},
  {"p": 13, "union": "L2+L5",       "matrix": [[1, 0], [0, 4]]},
  {"p": 13, "union": "L3+L5",       "matrix": [[1, 2], [2, 1]]},
  {"p": 13, "union": "L1+L2+L3",    "matrix": [[1, 0], [0, 2]], "correction": [[1, 5], [5, 1]]},
  {"p": 13, "union": "L1+L2+L5",    "matrix": [[1, 4], [4, -1]]},
  {"p": 13, "union": "L1+L3+L5",    "matrix": [[1, 2], [2, 1]]},
  {"p": 13, "union": "L2+L3+L5",    "matrix": [[1, 1], [1, -1]]},
  {"p": 13, "union": "L1+L2+L3+L5", "matrix": [[1, 0], [0, 2]]}
])json";

std::vector<SuborbitLabel> parse_union(const std::string& key)
{
    std::vector<SuborbitLabel> labels;
    std::size_t start = 0;
    while (start <= key.size()) {
        const std::size_t plus = key.find('+', start);
        const std::size_t end = plus == std::string::npos ? key.size() : plus;
        labels.push_back(SuborbitLabel::parse(key.substr(start, end - start)));
        if (plus == std::string::npos) {
            break;
        }
        start = plus + 1;
    }
    std::sort(labels.begin(), labels.end());
    return labels;
}

}  // namespace

const std::vector<ManifestEntry>& witness_manifest()
{
    static const std::vector<ManifestEntry> entries = [] {
        std::vector<ManifestEntry> out;
        for (const auto& row : nlohmann::json::parse(kManifest)) {
            const auto p = row.at("p").get<std::uint32_t>();
            const PrimeModulus mod(static_cast<std::int64_t>(p));
            const auto matrix = [&](const char* field) {
                return Matrix::from_rows(row.at(field).get<std::vector<std::vector<std::int64_t>>>(), mod);
            };
            ManifestEntry entry{p, parse_union(row.at("union").get<std::string>()), matrix("matrix"), std::nullopt};
            if (row.contains("correction")) {
                entry.correction = matrix("correction");
            }
            out.push_back(std::move(entry));
        }
        return out;
    }();
    return entries;
}

}  // namespace orbitals
