// N(B) on the blown-up plane against c tau B log B, with the running two-term fit.

#include <cmath>
#include <cstdio>
#include <thread>

#include "heightlab/heightlab.hpp"

using namespace heightlab;

int main(int argc, char **argv)
{
	unsigned long long const max_B = argc > 1 ? std::stoull(argv[1]) : 1000000;
	auto const m = CompactificationModel::load("blowup_p2");
	auto const est = euler_leading_constant(m, 100000, std::max(1u, std::thread::hardware_concurrency()));
	double const c = predicted_coefficient(m, est);
	std::printf("tau = %.6f  arch = %.6f  predicted coefficient %.6f\n", est.tau, est.archimedean_density, c);

	auto const samples = enumerate_points(m, log_spaced_bounds(max_B, 2));
	std::vector<CountSample> prefix;
	for (auto const &s : samples) {
		prefix.push_back(s);
		double const B = static_cast<double>(s.B);
		std::printf("B = %10llu  N = %10llu  N / (c B log B) = %.4f", s.B, s.N, static_cast<double>(s.N) / (c * B * std::log(B)));
		if (prefix.size() >= 3 && static_cast<double>(s.B) >= 100.0 * static_cast<double>(prefix.front().B))
			std::printf("  fit %.5f", fit_and_compare(prefix, 2, c).fitted);
		std::printf("\n");
	}
}
