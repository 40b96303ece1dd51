"""Local community detection with heat-kernel and PageRank diffusions."""
