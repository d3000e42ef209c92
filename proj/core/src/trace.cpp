#include "charter/trace.hpp"

#include "charter/errors.hpp"

namespace charter {

const char* to_string(TraceEventKind kind) noexcept {
    switch (kind) {
        case TraceEventKind::drafted: return "DRAFTED";
        case TraceEventKind::active: return "ACTIVE";
        case TraceEventKind::consumption: return "CONSUMPTION";
        case TraceEventKind::alert: return "ALERT";
        case TraceEventKind::allocation: return "ALLOCATION";
        case TraceEventKind::pool: return "POOL";
        case TraceEventKind::amendment: return "AMENDMENT";
        case TraceEventKind::fulfilled: return "FULFILLED";
        case TraceEventKind::violated: return "VIOLATED";
        case TraceEventKind::expired: return "EXPIRED";
        case TraceEventKind::terminated: return "TERMINATED";
        case TraceEventKind::conservation_check: return "CONSERVATION_CHECK";
    }
    return "?";
}

TraceEventKind trace_kind_from_string(const std::string& name) {
    static const std::map<std::string, TraceEventKind> kinds = {
        {"DRAFTED", TraceEventKind::drafted},
        {"ACTIVE", TraceEventKind::active},
        {"CONSUMPTION", TraceEventKind::consumption},
        {"ALERT", TraceEventKind::alert},
        {"ALLOCATION", TraceEventKind::allocation},
        {"POOL", TraceEventKind::pool},
        {"AMENDMENT", TraceEventKind::amendment},
        {"FULFILLED", TraceEventKind::fulfilled},
        {"VIOLATED", TraceEventKind::violated},
        {"EXPIRED", TraceEventKind::expired},
        {"TERMINATED", TraceEventKind::terminated},
        {"CONSERVATION_CHECK", TraceEventKind::conservation_check},
    };
    auto it = kinds.find(name);
    if (it == kinds.end()) raise(Errc::parse_error, "unknown trace event kind: " + name);
    return it->second;
}

TraceEventKind terminal_event_kind(Lifecycle state) {
    switch (state) {
        case Lifecycle::fulfilled: return TraceEventKind::fulfilled;
        case Lifecycle::violated: return TraceEventKind::violated;
        case Lifecycle::expired: return TraceEventKind::expired;
        case Lifecycle::terminated: return TraceEventKind::terminated;
        default: break;
    }
    raise(Errc::validation_error, std::string("not a terminal state: ") + to_string(state));
}

const TraceEvent& TraceLog::append(Timestamp logical_time_ms, const std::string& contract_id,
                                   TraceEventKind kind, nlohmann::json payload) {
    TraceEvent event;
    event.seq = next_seq_++;
    event.logical_time_ms = logical_time_ms;
    event.contract_id = contract_id;
    event.kind = kind;
    event.payload = std::move(payload);
    events_.push_back(std::move(event));
    return events_.back();
}

void TraceLog::clear() {
    events_.clear();
    next_seq_ = 0;
}

nlohmann::json to_json(const ResourceVector& vector) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [dimension, quantity] : vector.entries()) {
        if (quantity == ResourceVector::kOpen)
            out[dimension] = "open";
        else
            out[dimension] = quantity;
    }
    return out;
}

ResourceVector resource_vector_from_json(const nlohmann::json& value) {
    if (!value.is_object()) raise(Errc::parse_error, "resource vector must be an object");
    ResourceVector out;
    for (const auto& [dimension, quantity] : value.items()) {
        if (quantity.is_string() && quantity.get<std::string>() == "open")
            out.mark_open(dimension);
        else if (quantity.is_number_integer())
            out.set(dimension, quantity.get<std::int64_t>());
        else
            raise(Errc::parse_error, "quantity for " + dimension + " must be an integer or \"open\"");
    }
    return out;
}

std::string to_jsonl(const TraceEvent& event) {
    nlohmann::json line = {
        {"contract_id", event.contract_id},
        {"kind", to_string(event.kind)},
        {"logical_time_ms", event.logical_time_ms},
        {"payload", event.payload},
        {"schema_version", kTraceSchemaVersion},
        {"seq", event.seq},
    };
    return line.dump();
}

TraceEvent trace_event_from_jsonl(const std::string& line) {
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::parse_error, e.what());
    }
    TraceEvent event;
    try {
        event.seq = parsed.at("seq").get<std::uint64_t>();
        event.logical_time_ms = parsed.at("logical_time_ms").get<Timestamp>();
        event.contract_id = parsed.at("contract_id").get<std::string>();
        event.kind = trace_kind_from_string(parsed.at("kind").get<std::string>());
        event.payload = parsed.at("payload");
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::parse_error, std::string("trace event missing field: ") + e.what());
    }
    return event;
}

} // namespace charter
