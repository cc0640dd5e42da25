"""Process-similarity wavelet interpolation for single-image super-resolution."""
