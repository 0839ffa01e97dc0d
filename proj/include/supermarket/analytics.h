// Closed-form limits of the supermarket model with exponential service and
// FIFO queues, used as simulator oracles.

#ifndef SUPERMARKET_ANALYTICS_H_
#define SUPERMARKET_ANALYTICS_H_

#include <vector>

namespace supermarket {

// Limiting fraction of queues with at least i jobs when each arrival joins
// the shortest of d sampled queues: lambda^{(d^i - 1)/(d - 1)}, or
// lambda^i for d = 1. Throws std::domain_error unless 0 < lambda < 1 and
// d >= 1.
double supermarket_tail(double lambda, int d, int i);

// Tail values for i = 0 .. max_level inclusive.
std::vector<double> supermarket_tail_curve(double lambda, int d,
                                           int max_level);

// Mean response time by Little's law:
// (1/lambda) * sum_{i>=1} supermarket_tail(lambda, d, i), summed until a
// term drops below 1e-15.
double supermarket_mean_response(double lambda, int d);

}  // namespace supermarket

#endif  // SUPERMARKET_ANALYTICS_H_
