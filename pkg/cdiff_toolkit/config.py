#!/usr/bin/env python3
"""
Configuration Module
Central configuration for the field, search, case-study and report components
"""
import json
import os

# Field Settings
FIELD_CONFIG = {
    'max_order': 2 ** 20,               # largest supported p^n
    'interpolation_max_order': 2 ** 12  # Lagrange interpolation is O(order^2)
}

# Derivative Settings
DERIVATIVE_CONFIG = {
    'max_closed_order': 20   # inclusion-exclusion enumerates 2^t subsets
}

# Exhaustive Search Settings
SEARCH_CONFIG = {
    'threads': None,          # None -> os.cpu_count()
    'witness_cap': 16,
    'block_entries': 1 << 22, # derivative entries materialized per block
    'reduce_power': True,     # use the a1 = 1 reduction for monomials
    'progress': False
}

# Case Study Settings
CASE_STUDY_CONFIG = {
    'table1_degrees': [4, 5, 6, 7, 8],
    'table1_include_n9': False,
    'table1_expected': {
        4: (4, 5, 1),
        5: (4, 4, 1),
        6: (8, 5, 1),
        7: (8, 5, 1),
        8: (8, 6, 1),
        9: (8, 6, 1)
    },
    'inverse_bound': 6,
    'classical_counts': [0, 4, 8],
    'gold_grid': [(3, 4, 1), (3, 4, 2), (2, 4, 2), (2, 6, 2), (5, 2, 1)],
    'subfield_grid': [(3, 2, 1), (3, 4, 2)],
    'subfield_orders': [1, 2, 3],
    'quadratic_trials': 5,
    'quadratic_terms': 3
}

# Report Settings
REPORT_CONFIG = {
    'schema': 1,
    'json_indent': 2,
    'csv_delimiter': ',',
    'element_encoding': (
        "elements are decimal indices; base-p digit i of the index is the "
        "coefficient of x^i in the polynomial representative"
    )
}

# Logging Settings
LOG_CONFIG = {
    'level': 'WARNING',
    'format': '%(asctime)s %(levelname)s %(name)s: %(message)s'
}

THREADS_ENV = 'CDIFF_THREADS'
LOG_LEVEL_ENV = 'CDIFF_LOG_LEVEL'


class Config:
    """Configuration manager class"""

    def __init__(self):
        self.field = FIELD_CONFIG.copy()
        self.derivative = DERIVATIVE_CONFIG.copy()
        self.search = SEARCH_CONFIG.copy()
        self.case_study = {
            key: (value.copy() if isinstance(value, (dict, list)) else value)
            for key, value in CASE_STUDY_CONFIG.items()
        }
        self.report = REPORT_CONFIG.copy()
        self.log = LOG_CONFIG.copy()

    def update_from_dict(self, config_dict):
        """Update configuration from dictionary"""
        for section, values in config_dict.items():
            if hasattr(self, section):
                getattr(self, section).update(values)

    def to_dict(self):
        """Convert configuration to dictionary"""
        return {
            'field': self.field,
            'derivative': self.derivative,
            'search': self.search,
            'case_study': self.case_study,
            'report': self.report,
            'log': self.log
        }

    def save_to_file(self, filepath):
        """Save configuration to JSON file"""
        directory = os.path.dirname(filepath)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(filepath, 'w') as f:
            json.dump(self.to_dict(), f, indent=2, default=list)

    def load_from_file(self, filepath):
        """Load configuration from JSON file"""
        if os.path.exists(filepath):
            with open(filepath, 'r') as f:
                config_dict = json.load(f)
            expected = config_dict.get('case_study', {}).get('table1_expected')
            if expected:
                # JSON object keys come back as strings
                config_dict['case_study']['table1_expected'] = {
                    int(n): tuple(row) for n, row in expected.items()
                }
            self.update_from_dict(config_dict)

    def thread_count(self):
        """Worker count: env override, then config, then available CPUs"""
        env_value = os.environ.get(THREADS_ENV)
        if env_value:
            return max(1, int(env_value))
        if self.search['threads']:
            return max(1, int(self.search['threads']))
        return os.cpu_count() or 1

    def log_level(self):
        """Log level name, honouring the environment override"""
        return os.environ.get(LOG_LEVEL_ENV, self.log['level']).upper()

    def validate_config(self):
        """Validate configuration values"""
        errors = []

        if self.field['max_order'] < 2 or self.field['max_order'] > 2 ** 20:
            errors.append("max_order must lie in [2, 2^20]")

        if self.field['interpolation_max_order'] > self.field['max_order']:
            errors.append("interpolation_max_order exceeds max_order")

        if not (1 <= self.derivative['max_closed_order'] <= 20):
            errors.append("max_closed_order must lie in [1, 20]")

        if self.search['witness_cap'] < 1:
            errors.append("witness_cap must be positive")

        if self.search['block_entries'] < 1:
            errors.append("block_entries must be positive")

        threads = os.environ.get(THREADS_ENV)
        if threads is not None and not threads.strip().isdigit():
            errors.append(f"{THREADS_ENV} must be a positive integer")

        if any(n < 3 for n in self.case_study['table1_degrees']):
            errors.append("table1 degrees must be at least 3")

        return errors

    def reset_to_defaults(self):
        """Reset all configuration to defaults"""
        self.__init__()


# Global configuration instance
config = Config()

# Convenience functions
def get_config():
    """Get global configuration instance"""
    return config

def update_config(config_dict):
    """Update global configuration"""
    config.update_from_dict(config_dict)

def load_user_config(filepath):
    """Load user configuration from file"""
    config.load_from_file(filepath)

def save_user_config(filepath):
    """Save current configuration to file"""
    config.save_to_file(filepath)
