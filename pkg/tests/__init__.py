"""
Unit tests for the thermal machine simulator.
"""
