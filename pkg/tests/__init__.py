"""Test suite for Clopen Baire."""
