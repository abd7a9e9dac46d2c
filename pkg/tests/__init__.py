"""Test suite for egn-bounds."""
