#ifndef SUPERMARKET_EVENT_QUEUE_H_
#define SUPERMARKET_EVENT_QUEUE_H_

#include <cstdint>
#include <queue>
#include <vector>

namespace supermarket {

enum class EventKind : std::uint8_t { kArrival, kDeparture };

struct Event {
  double time = 0.0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::kArrival;
  std::uint32_t queue = 0;     // departures only
  std::uint64_t version = 0;   // departures only; see QueueState::version()
};

// Pending events ordered by time, ties by insertion order.
class EventQueue {
 public:
  void push(double time, EventKind kind, std::uint32_t queue = 0,
            std::uint64_t version = 0) {
    heap_.push(Event{time, next_sequence_++, kind, queue, version});
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& top() const { return heap_.top(); }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
};

}  // namespace supermarket

#endif  // SUPERMARKET_EVENT_QUEUE_H_
