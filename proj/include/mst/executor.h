#pragma once

// Executes input sequences against the SUT and serves Output(Input, i).

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mst/config.h"
#include "mst/model.h"
#include "mst/transport.h"

namespace mst {

inline constexpr const char* kClockOffsetHeader = "X-MST-Clock-Offset-Ms";

struct JournalEntry {
    std::string method;
    std::string url;
    std::string sequence_id;
};

class Executor {
public:
    Executor(SutConfig sut, WebConfig web, Transport& transport);

    void set_keep_dialogs_open(bool keep) { keep_dialogs_open_ = keep; }

    /// Output of action i, executing (and caching) the prefix 0..i on
    /// first use. Each sequence starts from an empty cookie jar and a zero
    /// clock offset. Throws PositionError for i outside the sequence.
    std::shared_ptr<const WebOutput> output_of(const InputSequence& seq, std::size_t i);

    /// POSTs to the reset endpoint; true iff the SUT answered 2xx.
    bool reset_sut(const std::string& sequence_id = {});

    const std::vector<JournalEntry>& journal() const { return journal_; }
    std::vector<RequestRecord> requests_for(const std::string& sequence_id) const;
    std::size_t requests_sent() const { return journal_.size(); }
    void clear_cache() { states_.clear(); }

private:
    struct SeqState {
        std::vector<Action> executed;
        std::vector<std::shared_ptr<const WebOutput>> outputs;
        Session jar;
        std::int64_t clock_ms = 0;
    };

    std::shared_ptr<const WebOutput> execute(const Action& a, SeqState& st, const std::string& seq_id);
    HttpResponse send_logged(HttpRequest req, const std::string& seq_id, std::vector<RequestRecord>& log);

    SutConfig sut_;
    WebConfig web_;
    Transport& transport_;
    bool keep_dialogs_open_ = false;
    std::map<std::string, SeqState> states_;
    std::vector<JournalEntry> journal_;
};

}  // namespace mst
