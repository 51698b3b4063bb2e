// Recorded responses from the live service (bypass-mode run with the
// bundled case-study table). Regenerate by hitting the endpoints and
// pasting the JSON verbatim; tests assert the UI shows these fields
// untouched.

export const fixtures = {
  "configWeights": {
    "cost_total": 0.25,
    "dissatisfaction": 0.1,
    "job_opportunities": 0.05,
    "local_profits": 0.05,
    "passive_queue_frequency": 0.1,
    "queue_frequency": 0.1,
    "road_safety": 0.1,
    "traffic_profit": 0.25
  },
  "normalizedMatrix": {
    "criteria": [
      {
        "id": "cost_total",
        "kind": "monetary",
        "label": "Cost Total",
        "simulation_derived": false
      },
      {
        "id": "traffic_profit",
        "kind": "monetary",
        "label": "Additional traffic profit",
        "simulation_derived": false
      },
      {
        "id": "local_profits",
        "kind": "binaryBenefit",
        "label": "Local profits",
        "simulation_derived": false
      },
      {
        "id": "job_opportunities",
        "kind": "binaryBenefit",
        "label": "Job Opportunities",
        "simulation_derived": false
      },
      {
        "id": "road_safety",
        "kind": "binaryBenefit",
        "label": "Road safety",
        "simulation_derived": false
      },
      {
        "id": "queue_frequency",
        "kind": "percentCost",
        "label": "Queue frequency",
        "simulation_derived": true
      },
      {
        "id": "passive_queue_frequency",
        "kind": "percentCost",
        "label": "Passive queue frequency",
        "simulation_derived": true
      },
      {
        "id": "dissatisfaction",
        "kind": "percentCost",
        "label": "Customer dissatisfaction",
        "simulation_derived": true
      }
    ],
    "options": [
      1,
      2,
      3
    ],
    "values": [
      [
        100.0,
        100.0,
        100.0,
        0.0,
        100.0,
        0.0,
        0.0,
        0.0
      ],
      [
        0.0,
        100.0,
        100.0,
        100.0,
        100.0,
        100.0,
        100.0,
        100.0
      ],
      [
        0.0,
        100.0,
        100.0,
        100.0,
        100.0,
        30.41895604395604,
        34.81426837684125,
        31.07876304378901
      ]
    ]
  },
  "rankings": {
    "cba": {
      "method": "cba",
      "order": [
        1,
        2,
        3
      ],
      "totals": {
        "1": 515257.7806452381,
        "2": 448705.86664523813,
        "3": 448705.86664523813
      }
    },
    "dynamicMcda": {
      "method": "dynamicMcda",
      "order": [
        2,
        1,
        3
      ],
      "totals": {
        "1": 65.0,
        "2": 75.0,
        "3": 54.63119874645863
      }
    },
    "staticMcda": {
      "method": "staticMcda",
      "order": [
        1,
        2,
        3
      ],
      "totals": {
        "1": 92.85714285714283,
        "2": 64.28571428571428,
        "3": 64.28571428571428
      }
    }
  },
  "score": {
    "cba": {
      "method": "cba",
      "order": [
        1,
        2,
        3
      ],
      "totals": {
        "1": 515257.7806452381,
        "2": 448705.86664523813,
        "3": 448705.86664523813
      }
    },
    "dynamic": {
      "method": "dynamicMcda",
      "order": [
        2,
        1,
        3
      ],
      "totals": {
        "1": 65.0,
        "2": 75.0,
        "3": 54.63119874645863
      }
    },
    "provenance": {
      "config_hash": "d6c2ec499fb4",
      "master_seed": 20100206,
      "simulation_source": "injected",
      "tool_version": "0.1.0"
    },
    "static": {
      "method": "staticMcda",
      "order": [
        1,
        2,
        3
      ],
      "totals": {
        "1": 92.85714285714283,
        "2": 64.28571428571428,
        "3": 64.28571428571428
      }
    }
  },
  "sensitivityAll": {
    "provenance": {
      "config_hash": "d6c2ec499fb4",
      "master_seed": 20100206,
      "simulation_source": "injected",
      "tool_version": "0.1.0"
    },
    "report": {
      "iterations": 500,
      "rank_distribution": {
        "1": [
          32.4,
          35.0,
          32.6
        ],
        "2": [
          55.2,
          29.6,
          15.2
        ],
        "3": [
          12.4,
          35.4,
          52.2
        ]
      },
      "seed": 1,
      "top_rank_frequency": {
        "1": 32.4,
        "2": 55.2,
        "3": 12.4
      },
      "variant": "allCriteria"
    }
  },
  "sensitivitySelected": {
    "provenance": {
      "config_hash": "d6c2ec499fb4",
      "master_seed": 20100206,
      "simulation_source": "injected",
      "tool_version": "0.1.0"
    },
    "report": {
      "iterations": 500,
      "rank_distribution": {
        "1": [
          0.0,
          100.0,
          0.0
        ],
        "2": [
          100.0,
          0.0,
          0.0
        ],
        "3": [
          0.0,
          0.0,
          100.0
        ]
      },
      "seed": 1,
      "top_rank_frequency": {
        "1": 0.0,
        "2": 100.0,
        "3": 0.0
      },
      "variant": "selectedCriteria"
    }
  }
} as const;
