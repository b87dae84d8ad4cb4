"""
Configuration manager for vigil
Loads settings from config.yaml and merges them over the defaults
"""
import copy
import logging
import os

import yaml

logger = logging.getLogger(__name__)

# Default configuration
DEFAULT_CONFIG = {
    'epoch': {
        'seconds': 20,
        'mode': 'all'
    },
    'features': {
        'undefined_ratio': 1.0e-12
    },
    'fcm': {
        'clusters': 3,
        'fuzzifier': 2.0,
        'tol': 1.0e-6,
        'max_iter': 300
    },
    'fuzzy': {
        'output_resolution': 10001,
        'universe_padding': 0.05,
        'degenerate_width': 0.1
    },
    'report': {
        'format': 'csv',
        'significant_digits': 9,
        'output_dir': 'vigil_out'
    },
    'plots': {
        'enabled': False,
        'epochs': ['start', 'middle', 'end']
    },
    'logging': {
        'enabled': True,
        'level': 'INFO',
        'log_dir': None
    }
}


class ConfigManager:
    """Manages analysis configuration"""

    def __init__(self, config_path=None):
        """
        Initialize configuration manager

        Args:
            config_path: Path to config file, defaults to $VIGIL_CONFIG
                or config.yaml in the working directory
        """
        self.config_path = config_path or os.environ.get('VIGIL_CONFIG', 'config.yaml')
        self.config = copy.deepcopy(DEFAULT_CONFIG)
        self.load()

    def load(self):
        """Load configuration from file"""
        if not os.path.exists(self.config_path):
            return
        try:
            with open(self.config_path, 'r') as f:
                loaded_config = yaml.safe_load(f)
            if loaded_config:
                self._deep_update(self.config, loaded_config)
        except (OSError, yaml.YAMLError) as e:
            logger.warning("Could not load config %s: %s", self.config_path, e)
            logger.warning("Using default configuration")

    def reset(self):
        """Drop loaded values and return to the defaults"""
        self.config = copy.deepcopy(DEFAULT_CONFIG)

    def _deep_update(self, base, update):
        """Recursively update nested dictionary"""
        for key, value in update.items():
            if isinstance(value, dict) and isinstance(base.get(key), dict):
                self._deep_update(base[key], value)
            else:
                base[key] = value

    def get(self, *keys):
        """
        Get configuration value by path

        Args:
            *keys: Path to configuration value

        Returns:
            Configuration value
        """
        value = self.config
        for key in keys:
            value = value[key]
        return value


# Global config instance
config = ConfigManager()
