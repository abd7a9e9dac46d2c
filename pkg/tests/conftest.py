"""Shared pytest configuration."""


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance sweeps that take several seconds")
