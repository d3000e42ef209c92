#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "charter/contract.hpp"
#include "charter/resource_vector.hpp"

namespace charter {

/// Trace schema version; bumped whenever field names or payload layouts
/// change. Golden-file tests pin the current layout.
inline constexpr int kTraceSchemaVersion = 1;

enum class TraceEventKind {
    drafted,
    active,
    consumption,
    alert,
    allocation,
    pool,
    amendment,
    fulfilled,
    violated,
    expired,
    terminated,
    conservation_check,
};

const char* to_string(TraceEventKind kind) noexcept;
TraceEventKind trace_kind_from_string(const std::string& name);
TraceEventKind terminal_event_kind(Lifecycle state);

/// One append-only audit record. Every transition, consumption, allocation,
/// pool movement and alert in a run appears exactly once as a TraceEvent.
struct TraceEvent {
    std::uint64_t seq = 0;
    Timestamp logical_time_ms = 0;
    std::string contract_id;
    TraceEventKind kind = TraceEventKind::drafted;
    nlohmann::json payload;
};

/// Append-only event sink with monotone sequence numbering.
class TraceLog {
public:
    const TraceEvent& append(Timestamp logical_time_ms, const std::string& contract_id,
                             TraceEventKind kind, nlohmann::json payload);

    const std::vector<TraceEvent>& events() const { return events_; }
    bool empty() const { return events_.empty(); }
    void clear();

private:
    std::vector<TraceEvent> events_;
    std::uint64_t next_seq_ = 0;
};

/// One UTF-8 JSON object per event, keys sorted, integers only for
/// quantities. An open budget bound serializes as the string "open".
std::string to_jsonl(const TraceEvent& event);
TraceEvent trace_event_from_jsonl(const std::string& line);

nlohmann::json to_json(const ResourceVector& vector);
ResourceVector resource_vector_from_json(const nlohmann::json& value);

} // namespace charter
