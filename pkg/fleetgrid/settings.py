"""
Django settings para o projeto fleetgrid.
Sem banco de dados: o Django fornece settings, registro de apps, logging
e os management commands que formam o pipeline.
"""
from pathlib import Path

from decouple import config

# ─── Caminhos ─────────────────────────────────────────────────
BASE_DIR = Path(__file__).resolve().parent.parent

# ─── Apps instalados ──────────────────────────────────────────
INSTALLED_APPS = [
    'corpus.apps.CorpusConfig',
    'population.apps.PopulationConfig',
    'network.apps.NetworkConfig',
    'modechoice.apps.ModechoiceConfig',
    'agentsim.apps.AgentsimConfig',
    'eventsim.apps.EventsimConfig',
    'metrics.apps.MetricsConfig',
    'v2g.apps.V2gConfig',
    'pipeline.apps.PipelineConfig',
]

# Nenhuma persistência em banco: tudo é CSV.
DATABASES = {}

# ─── Logging ──────────────────────────────────────────────────
FLEETGRID_LOG = config('FLEETGRID_LOG', default='WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simples': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simples',
        },
    },
    'loggers': {
        app: {'handlers': ['console'], 'level': FLEETGRID_LOG, 'propagate': False}
        for app in (
            'corpus', 'population', 'network', 'modechoice',
            'agentsim', 'eventsim', 'metrics', 'v2g', 'pipeline',
        )
    },
}

# ─── Execução ─────────────────────────────────────────────────
FLEETGRID_SCALE = config('FLEETGRID_SCALE', default=0.01, cast=float)
FLEETGRID_JOBS = config('FLEETGRID_JOBS', default=1, cast=int)
FLEETGRID_QP_SOLVER = config('FLEETGRID_QP_SOLVER', default='CLARABEL')
FLEETGRID_V2G_METHOD = config('FLEETGRID_V2G_METHOD', default='admm')
FLEETGRID_START_WEEKDAY = config('FLEETGRID_WEEKDAY', default=2, cast=int)

# ─── Cenários ─────────────────────────────────────────────────
# Rede atual (escala real): estações, veículos e assinantes.
CURRENT_NETWORK = {
    'stations': 1750,
    'vehicles': 3000,
    'users': 100000,
    'grid_zone_share': 246 / 1750,
}

SCENARIO_PRESETS = {
    1: {'name': 'Crescimento lento - centrado no usuário',
        'n_users': 115000, 'v_desired': 3500, 'k_new_stations': 0},
    2: {'name': 'Crescimento intermediário - centrado no usuário',
        'n_users': 150000, 'v_desired': 4500, 'k_new_stations': 0},
    3: {'name': 'Crescimento rápido - centrado no usuário',
        'n_users': 250000, 'v_desired': 7500, 'k_new_stations': 0},
    4: {'name': 'Crescimento rápido - restritivo',
        'n_users': 250000, 'v_desired': 5000, 'k_new_stations': 0},
    5: {'name': 'Crescimento rápido - V2G',
        'n_users': 250000, 'v_desired': 10000, 'k_new_stations': 0},
    6: {'name': 'Crescimento rápido - expansão',
        'n_users': 250000, 'v_desired': 7500, 'k_new_stations': 1250},
}

DEFAULT_PRICE_LEVELS = (0.0, 10.0, 100.0, 500.0, 1000.0, 2000.0, 5000.0)
DEFAULT_TIMESTEP_MINUTES = 15
NEW_STATION_VEHICLES = 2

# ─── Frota ────────────────────────────────────────────────────
CATEGORY_SHARES = {
    'Budget': 0.35,
    'Combi': 0.30,
    'Premium': 0.10,
    'Transporter': 0.15,
    'Other': 0.10,
}

# Um modelo de VE por categoria: bateria (kWh), potências (kW), consumo (kWh/km).
VEHICLE_MODELS = {
    'Budget': {'battery_kwh': 40.0, 'max_charge_kw': 11.0,
               'max_discharge_kw': 11.0, 'consumption_kwh_per_km': 0.16},
    'Combi': {'battery_kwh': 58.0, 'max_charge_kw': 11.0,
              'max_discharge_kw': 11.0, 'consumption_kwh_per_km': 0.18},
    'Premium': {'battery_kwh': 77.0, 'max_charge_kw': 22.0,
                'max_discharge_kw': 11.0, 'consumption_kwh_per_km': 0.20},
    'Transporter': {'battery_kwh': 75.0, 'max_charge_kw': 11.0,
                    'max_discharge_kw': 11.0, 'consumption_kwh_per_km': 0.28},
    'Other': {'battery_kwh': 50.0, 'max_charge_kw': 11.0,
              'max_discharge_kw': 11.0, 'consumption_kwh_per_km': 0.18},
}

SOC_MIN = 0.1
SOC_MAX = 0.95
SOC_INITIAL = 0.6
CHARGE_EFFICIENCY = 0.95
DISCHARGE_EFFICIENCY = 0.95

# ─── População sintética ──────────────────────────────────────
# Centros populacionais (x, y, desvio em metros, peso) em um plano métrico local.
POPULATION_CENTERS = (
    (0.0, 0.0, 9000.0, 0.34),
    (-62000.0, 18000.0, 7000.0, 0.18),
    (38000.0, -31000.0, 6000.0, 0.14),
    (-21000.0, -52000.0, 7500.0, 0.17),
    (84000.0, 12000.0, 5000.0, 0.17),
)

TRIP_DISTANCE_MU = 8.724
TRIP_DISTANCE_SIGMA = 1.127
TRIP_DISTANCE_MAX_M = 200000.0

PT_GRID_CELL_M = 5000.0
STATION_DISTANCE_SENTINEL_M = 50000.0

# ─── Modelo de escolha modal ──────────────────────────────────
GBT_DEFAULTS = {
    'learning_rate': 0.1,
    'n_rounds': 200,
    'min_samples_leaf': 10,
    'reg_lambda': 1.0,
}
GBT_DEPTH_GRID = (2, 3, 4, 5, 6)

# Versão reduzida usada pelo comando scenario.
SCENARIO_MODEL = {
    'n_samples': 8000,
    'learning_rate': 0.2,
    'n_rounds': 60,
    'depth_grid': (3, 4),
}

# ─── V2G ──────────────────────────────────────────────────────
TARIFF_PEAK = config('FLEETGRID_TARIFF_PEAK', default=0.25, cast=float)
TARIFF_OFFPEAK = config('FLEETGRID_TARIFF_OFFPEAK', default=0.15, cast=float)
TARIFF_PEAK_HOURS = (7, 20)
PEAK_COST_CHF_PER_MW = config('FLEETGRID_PEAK_COST', default=4850.0, cast=float)
GRID_REIMBURSEMENT = config('FLEETGRID_GRID_REIMBURSEMENT', default=False, cast=bool)

ADMM_DEFAULTS = {
    'rho': 1.0,
    'max_iter': 500,
    'power_base_kw': 10.0,
    'eps': 1e-4,
}
# Penalidade (CHF/kW²) sobre o desvio do perfil base nas respostas a preço.
PRICE_RESPONSE_WEIGHT = 1e-4
# Peso (CHF/kW²) do rastreamento de perfil de referência.
REFERENCE_TRACKING_WEIGHT = 1e-2
# Regularização (CHF/kW²) nas potências de cada veículo.
POWER_REGULARIZATION = 1e-6
