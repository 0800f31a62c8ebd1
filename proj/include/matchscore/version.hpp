#pragma once

#define MATCHSCORE_VERSION "0.1.0"
